//! Light-vector counts of evaluation codes against the effective bound
//! A_d >= C(N, a) / (sqrt q + 1)^{2g}.

use crate::bounds::{light_per_symbol, BoundReport, Evaluator};
use crate::codes::linear::{binomial, LinearCode};
use crate::error::{Error, Result};

/// Number of codewords of weight exactly `d`.
fn count_weight(code: &LinearCode, d: usize) -> Result<u128> {
    if code.within_enumeration_budget() {
        return Ok(code.weight_distribution()?.get(d).copied().unwrap_or(0) as u128);
    }
    let (dmin, count) = code.min_weight_by_supports()?;
    match dmin.cmp(&d) {
        std::cmp::Ordering::Equal => Ok(count),
        std::cmp::Ordering::Greater => Ok(0),
        std::cmp::Ordering::Less => Err(Error::BudgetExceeded {
            what: "weight count above the minimum distance",
            needed: (code.q() as u128).saturating_pow(code.k() as u32),
            budget: crate::codes::linear::ENUMERATION_BUDGET as u128,
        }),
    }
}

/// Measured A_d at d = N - a against C(N, a)/(sqrt q + 1)^{2g}, plus the
/// per-symbol form (log A_d)/N against
/// H(delta) - (2g/N) log(sqrt q + 1) - log(2 pi a d)/(2N) - 1/(12 a d).
pub fn light_vector_bound(code: &LinearCode, genus: u64, a: usize) -> Result<BoundReport> {
    let ev = Evaluator::new(crate::bounds::DEFAULT_BITS)?;
    let n = code.n();
    if a == 0 || a >= n {
        return Err(Error::InvalidParameter(format!("need 1 <= a < N = {n}, got {a}")));
    }
    let d = n - a;
    let ad = count_weight(code, d)?;
    let q = code.q() as u64;
    let choose = binomial(n as u64, a as u64);
    let jac = ev.powi(&ev.add(&ev.sqrt(&ev.int(q as i64)), &ev.int(1)), 2 * genus as usize);
    let rhs = ev.div(&ev.from_u128(choose), &jac);
    let holds_exact =
        if genus == 0 { ad >= choose } else { ev.cmp(&ev.from_u128(ad), &rhs) != std::cmp::Ordering::Less };
    let per_lhs =
        if ad == 0 { f64::NEG_INFINITY } else { ev.to_f64(&ev.div(&ev.log2(&ev.from_u128(ad)), &ev.int(n as i64))) };
    let per_rhs = ev.to_f64(&light_per_symbol(&ev, q, genus, n as u64, a as u64)?);
    let mut r =
        BoundReport::new(&ev, "light_vectors", "A_d >= C(N,a)/(sqrt q + 1)^(2g), d = N - a", &ev.from_u128(ad), 0.0)
            .input("q", q)
            .input("N", n)
            .input("a", a)
            .input("g", genus)
            .detail("d", d)
            .detail("A_d", ad)
            .detail("binomial", choose)
            .detail("rhs", ev.to_fixed(&rhs, 12))
            .detail("per_symbol_lhs", per_lhs)
            .detail("per_symbol_rhs", per_rhs);
    r.holds = Some(holds_exact && per_lhs >= per_rhs);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FiniteField;
    use crate::codes::families::{ag_code, rs_code, EvaluationData};
    use std::sync::Arc;

    #[test]
    fn rs_8_4() {
        let c = rs_code(Arc::new(FiniteField::of_order(8).unwrap()), 4).unwrap();
        let r = light_vector_bound(&c, 0, 4).unwrap();
        assert_eq!(r.details["A_d"], "490");
        assert_eq!(r.details["binomial"], "70");
        assert_eq!(r.holds, Some(true));
    }

    #[test]
    fn rs_4_2() {
        let c = rs_code(Arc::new(FiniteField::of_order(4).unwrap()), 2).unwrap();
        let r = light_vector_bound(&c, 0, 2).unwrap();
        assert_eq!(r.details["A_d"], "18");
        assert_eq!(r.holds, Some(true));
    }

    #[test]
    fn hermitian_a4() {
        let c = ag_code(&EvaluationData::hermitian_gf4(4).unwrap()).unwrap();
        let r = light_vector_bound(&c, 1, 4).unwrap();
        let ad: f64 = r.details["A_d"].parse().unwrap();
        assert!(ad >= 70.0 / 9.0);
    }
}
