use super::Formula;

/// Canonical ASCII rendering. Binary connectives are always parenthesised;
/// a quantifier is parenthesised only when it is the left operand of a
/// binary connective (elsewhere its body already ends at the enclosing
/// `)` or at the end of input).
pub fn print_formula(f: &Formula) -> String {
    let mut out = String::new();
    write(f, &mut out);
    out
}

fn write(f: &Formula, out: &mut String) {
    match f {
        Formula::Bottom => out.push_str("bot"),
        Formula::Atom { letter, args } => {
            out.push_str(letter);
            if !args.is_empty() {
                out.push('(');
                out.push_str(&args.join(", "));
                out.push(')');
            }
        }
        Formula::And(a, b) => binary(a, "&", b, out),
        Formula::Or(a, b) => binary(a, "|", b, out),
        Formula::Implies(a, b) => binary(a, "->", b, out),
        Formula::Forall(v, body) => quantifier("forall", v, body, out),
        Formula::Exists(v, body) => quantifier("exists", v, body, out),
    }
}

fn binary(a: &Formula, op: &str, b: &Formula, out: &mut String) {
    out.push('(');
    if matches!(a, Formula::Forall(..) | Formula::Exists(..)) {
        out.push('(');
        write(a, out);
        out.push(')');
    } else {
        write(a, out);
    }
    out.push(' ');
    out.push_str(op);
    out.push(' ');
    write(b, out);
    out.push(')');
}

fn quantifier(kw: &str, var: &str, body: &Formula, out: &mut String) {
    out.push_str(kw);
    out.push(' ');
    out.push_str(var);
    out.push_str(". ");
    write(body, out);
}
