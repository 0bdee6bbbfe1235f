//! Multivariate division (normal form) and S-polynomials.

use crate::poly::{MonomialOrder, Polynomial, Term};

/// Outcome of dividing `f` by a list of divisors.
#[derive(Clone, Debug)]
pub struct Division {
    pub quotients: Vec<Polynomial>,
    pub remainder: Polynomial,
    /// Number of single reduction steps (polynomial additions) performed.
    pub steps: u64,
}

/// Divides `f` by the list `divisors`, producing quotients and a remainder
/// with `f = sum(q_i * g_i) + r` and no monomial of `r` divisible by any
/// leading monomial of the divisors.
///
/// Deterministic: at every step the current leading monomial is reduced by
/// the first divisor in list order whose leading monomial divides it; if
/// none does, the term moves to the remainder.
pub fn divide(f: &Polynomial, divisors: &[Polynomial], ord: &MonomialOrder) -> Division {
    for g in divisors {
        assert!(!g.is_zero(), "division by the zero polynomial");
    }
    let arity = f.arity();
    let mut quotients = vec![Polynomial::zero(arity); divisors.len()];
    let mut remainder_terms: Vec<Term> = Vec::new();
    let mut p = f.clone();
    let mut steps = 0u64;
    'outer: while let Some((lc, lm)) = p.leading_term().cloned() {
        for (i, g) in divisors.iter().enumerate() {
            let (gc, gm) = g.leading_term().expect("nonzero divisor");
            if let Some(q_mono) = lm.checked_div(gm) {
                let q_coeff = lc.div(gc);
                p = p.sub(&g.mul_term(&q_coeff, &q_mono), ord);
                quotients[i] = quotients[i].add(
                    &Polynomial::from_terms(vec![(q_coeff, q_mono)], ord, arity),
                    ord,
                );
                steps += 1;
                continue 'outer;
            }
        }
        // Irreducible leading term: move it to the remainder. Terms arrive
        // in strictly decreasing order, so no re-sort is needed.
        remainder_terms.push((lc, lm));
        p.pop_leading();
    }
    let remainder = Polynomial::from_sorted_terms(remainder_terms, arity);
    Division {
        quotients,
        remainder,
        steps,
    }
}

/// The spec'd normal-form surface: quotients and remainder.
pub fn normal_form(
    f: &Polynomial,
    divisors: &[Polynomial],
    ord: &MonomialOrder,
) -> (Vec<Polynomial>, Polynomial) {
    let d = divide(f, divisors, ord);
    (d.quotients, d.remainder)
}

/// Remainder only.
pub fn reduce_fully(f: &Polynomial, divisors: &[Polynomial], ord: &MonomialOrder) -> Polynomial {
    divide(f, divisors, ord).remainder
}

/// S(f, g) = (L/init f)·f − (L/init g)·g with L = lcm of the leading
/// monomials, scaled so both leading terms cancel exactly. Panics on zero
/// input.
pub fn s_polynomial(f: &Polynomial, g: &Polynomial, ord: &MonomialOrder) -> Polynomial {
    let (fc, fm) = f.leading_term().expect("S-polynomial of zero");
    let (gc, gm) = g.leading_term().expect("S-polynomial of zero");
    let l = fm.lcm(gm);
    let left = f.mul_term(&fc.inv(), &l.checked_div(fm).unwrap());
    let right = g.mul_term(&gc.inv(), &l.checked_div(gm).unwrap());
    left.sub(&right, ord)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse::parse_polynomial;
    use crate::poly::Ring;

    fn ring() -> Ring {
        Ring::rational_grevlex(3)
    }

    fn p(src: &str) -> Polynomial {
        parse_polynomial(src, &ring()).unwrap()
    }

    #[test]
    fn division_identity_on_worked_example() {
        // x1^3 - x3 = x1 * (x1^2 - x2) + (x1*x2 - x3)
        let ord = MonomialOrder::grevlex();
        let f = p("x1^3 - x3");
        let g = p("x1^2 - x2");
        let (q, r) = normal_form(&f, std::slice::from_ref(&g), &ord);
        assert_eq!(q[0], p("x1"));
        assert_eq!(r, p("x1*x2 - x3"));
        // Verify the identity f = q*g + r by direct expansion.
        assert_eq!(q[0].mul(&g, &ord).add(&r, &ord), f);
    }

    #[test]
    fn member_of_groebner_basis_reduces_to_zero() {
        let ord = MonomialOrder::grevlex();
        // {x1^2 - x2, x1*x2 - x3, x2^2 - x1*x3} is a Gröbner basis of
        // (x1^2 - x2, x1^3 - x3); members of the ideal reduce to zero.
        let basis = vec![p("x1^2 - x2"), p("x1*x2 - x3"), p("x2^2 - x1*x3")];
        let f = p("x1^3 - x3");
        assert!(reduce_fully(&f, &basis, &ord).is_zero());
    }

    #[test]
    fn no_divisor_applies() {
        let ord = MonomialOrder::grevlex();
        let f = p("x2");
        let (q, r) = normal_form(&f, &[p("x1^2")], &ord);
        assert!(q[0].is_zero());
        assert_eq!(r, f);
    }

    #[test]
    fn empty_divisor_list_returns_input() {
        let ord = MonomialOrder::grevlex();
        let f = p("x1^2 - x2");
        let (q, r) = normal_form(&f, &[], &ord);
        assert!(q.is_empty());
        assert_eq!(r, f);
    }

    #[test]
    fn s_polynomial_worked_example() {
        // S(x1^2 - x2, x1^3 - x3): L = x1^3, result -x1*x2 + x3.
        let ord = MonomialOrder::grevlex();
        let s = s_polynomial(&p("x1^2 - x2"), &p("x1^3 - x3"), &ord);
        assert_eq!(s, p("-x1*x2 + x3"));
        assert_eq!(s.normalize(), p("x1*x2 - x3"));
    }

    #[test]
    fn s_polynomial_of_identical_inputs_is_zero() {
        let ord = MonomialOrder::grevlex();
        let f = p("x1*x2 - x3");
        assert!(s_polynomial(&f, &f, &ord).is_zero());
    }

    #[test]
    fn s_polynomial_second_example() {
        // S(x1*x2 - x3, x1^2 - x2): L = x1^2*x2,
        // x1*(x1*x2 - x3) - x2*(x1^2 - x2) = x2^2 - x1*x3.
        let ord = MonomialOrder::grevlex();
        let s = s_polynomial(&p("x1*x2 - x3"), &p("x1^2 - x2"), &ord);
        assert_eq!(s, p("x2^2 - x1*x3"));
    }

    #[test]
    fn s_polynomial_leading_terms_cancel() {
        let ord = MonomialOrder::grevlex();
        let f = p("x1^2*x2 + x3");
        let g = p("x1*x2^2 + 1");
        let s = s_polynomial(&f, &g, &ord);
        let l = f
            .leading_monomial()
            .unwrap()
            .lcm(g.leading_monomial().unwrap());
        assert!(ord.compare(s.leading_monomial().unwrap(), &l) == std::cmp::Ordering::Less);
    }
}
