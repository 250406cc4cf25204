//! Closed-form parameter chains for the host-graph and Erdős–Rogers
//! statements, evaluated exactly. Decimal fields are for display only.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ratio::{big_decimal, decimal, exact_string};
use crate::sparsifier::{ceil_log2, ceil_log2_inverse, sparsifier_chain, SparsifierChain};

/// An exact value with a display rendering next to it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Exact {
    pub exact: String,
    pub decimal: String,
}

impl Exact {
    fn rational(r: &BigRational) -> Exact {
        Exact {
            exact: exact_string(r),
            decimal: big_decimal(r),
        }
    }

    fn integer(n: &BigUint) -> Exact {
        Exact::rational(&BigRational::from_integer(BigInt::from(n.clone())))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Flag {
    pub name: &'static str,
    pub holds: bool,
}

fn flag(name: &'static str, holds: bool) -> Flag {
    Flag { name, holds }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeometryGraphParams {
    pub q: String,
    /// `q²(q² − q + 1)`.
    pub vertex_count: Exact,
    /// `2^25 / q²`.
    pub zeta: Exact,
    /// `1 / (128q)`.
    pub d: Exact,
    pub validity_flags: Vec<Flag>,
    pub claim: &'static str,
    #[serde(skip)]
    pub n_exact: BigUint,
    #[serde(skip)]
    pub zeta_exact: BigRational,
    #[serde(skip)]
    pub d_exact: BigRational,
}

impl GeometryGraphParams {
    pub fn all_flags_hold(&self) -> bool {
        self.validity_flags.iter().all(|f| f.holds)
    }
}

/// Vertex count and density pair of the K4-free finite-geometry host graph
/// for prime power `q`. The graph itself is not built.
pub fn geometry_graph_params(q: &BigUint) -> Result<GeometryGraphParams> {
    if *q < BigUint::from(2u32) {
        return Err(Error::InvalidParameter(format!("q must be at least 2, got {q}")));
    }
    let q2 = q * q;
    let n = &q2 * (&q2 - q + 1u32);
    let zeta = BigRational::new(BigInt::from(1u64 << 25), BigInt::from(q2.clone()));
    let d = BigRational::new(BigInt::one(), BigInt::from(q * 128u32));
    let threshold: BigUint = BigUint::one() << 40u32;
    Ok(GeometryGraphParams {
        q: q.to_string(),
        vertex_count: Exact::integer(&n),
        zeta: Exact::rational(&zeta),
        d: Exact::rational(&d),
        validity_flags: vec![
            flag("q > 2^40", *q > threshold),
            flag("zeta <= 1", zeta <= BigRational::one()),
        ],
        claim: "K4-free on q^2(q^2-q+1) vertices and (2^25/q^2, 1/(128q))-dense for q > 2^40",
        n_exact: n,
        zeta_exact: zeta,
        d_exact: d,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NoSparseHostParams {
    pub geometry: GeometryGraphParams,
    pub bound: String,
    /// `None` when the chain is infeasible; see `infeasible`.
    pub chain: Option<SparsifierChain>,
    pub infeasible: Option<String>,
    /// `t = 2s`.
    pub t: Option<Exact>,
    pub p: Option<String>,
    /// `ceil(log2(1/ζ))` against `ceil(log2 q²) − 25`.
    pub log_identity_holds: Option<bool>,
    pub validity_flags: Vec<Flag>,
    pub claim: &'static str,
}

/// Feeds the host-graph parameters through the sampling chain.
pub fn no_sparse_host_params(q: &BigUint, bound: &BigUint) -> Result<NoSparseHostParams> {
    if bound.is_zero() {
        return Err(Error::InvalidParameter("degree bound D must be at least 1".into()));
    }
    let geometry = geometry_graph_params(q)?;
    let log_identity_holds = (geometry.zeta_exact <= BigRational::one()).then(|| {
        ceil_log2_inverse(&geometry.zeta_exact) + 25 == ceil_log2(&(q * q))
    });
    let (chain, infeasible) = match sparsifier_chain(&geometry.n_exact, &geometry.zeta_exact, &geometry.d_exact, bound) {
        Ok(c) => (Some(c), None),
        Err(Error::Infeasible { constraint }) => (None, Some(constraint)),
        Err(e) => return Err(e),
    };
    let mut validity_flags = geometry.validity_flags.clone();
    validity_flags.push(flag("chain feasible", chain.is_some()));
    Ok(NoSparseHostParams {
        t: chain.as_ref().map(|c| Exact::integer(&(&c.s * 2u32))),
        p: chain.as_ref().map(|c| decimal(c.p)),
        geometry,
        bound: bound.to_string(),
        chain,
        infeasible,
        log_identity_holds,
        validity_flags,
        claim: "|V'| = Omega(D q^3 (log q)^2) with no sparse 2s-set, t = Theta(D q (log q)^2)",
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErdosRogersShape {
    pub n: String,
    pub alpha: String,
    pub c: String,
    /// `1 / (3 − 2α)`.
    pub n_exponent: Exact,
    /// `4 / (3 − 2α)`.
    pub log_exponent: Exact,
    /// `n^a · (log2 n)^b`.
    pub t_shape: String,
    /// `t^(3−2α) / (log2 t)^4` evaluated at `t_shape`.
    pub n_from_t: String,
    /// `C · t^α` at `t_shape`.
    pub degree_bound: String,
    pub validity_flags: Vec<Flag>,
    pub label: &'static str,
    pub claim: &'static str,
    #[serde(skip)]
    pub exponents: (BigRational, BigRational),
    #[serde(skip)]
    pub t_value: f64,
}

fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Exponents and shape values of the upper bound `n^(1/(3−2α)) (log n)^(4/(3−2α))`.
/// No hidden constants are applied.
pub fn erdos_rogers_shape(n: &BigUint, alpha: &BigRational, c: &BigRational) -> Result<ErdosRogersShape> {
    if *n < BigUint::from(2u32) {
        return Err(Error::InvalidParameter("n must be at least 2".into()));
    }
    let three = BigRational::from_integer(3.into());
    let two = BigRational::from_integer(2.into());
    if *alpha < BigRational::zero() || &two * alpha >= three {
        return Err(Error::InvalidParameter(format!(
            "alpha must satisfy 0 <= alpha < 3/2, got {}",
            exact_string(alpha)
        )));
    }
    let denom = &three - &two * alpha;
    let a = denom.recip();
    let b = BigRational::from_integer(4.into()) / &denom;
    let log2_n = {
        let bits = n.bits();
        if bits <= 1000 {
            n.to_f64().unwrap().log2()
        } else {
            (n >> (bits - 64)).to_f64().unwrap().log2() + (bits - 64) as f64
        }
    };
    let (af, bf, alf) = (to_f64(&a), to_f64(&b), to_f64(alpha));
    let log2_t = af * log2_n + bf * log2_n.log2();
    let t = log2_t.exp2();
    let n_back = (to_f64(&denom) * log2_t - 4.0 * log2_t.log2()).exp2();
    let degree = to_f64(c) * (alf * log2_t).exp2();
    let half = BigRational::new(1.into(), 2.into());
    Ok(ErdosRogersShape {
        n: n.to_string(),
        alpha: exact_string(alpha),
        c: exact_string(c),
        n_exponent: Exact::rational(&a),
        log_exponent: Exact::rational(&b),
        t_shape: decimal(t),
        n_from_t: decimal(n_back),
        degree_bound: decimal(degree),
        validity_flags: vec![
            flag("alpha < 1/2", *alpha < half),
            flag("C > 0", *c > BigRational::zero()),
        ],
        label: "shape only",
        claim: "f_{F,K4}(n) = O(n^(1/(3-2alpha)) (log n)^(4/(3-2alpha)))",
        exponents: (a, b),
        t_value: t,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::parse_big_ratio;

    fn q(n: u64) -> BigUint {
        BigUint::from(n)
    }

    fn r(s: &str) -> BigRational {
        parse_big_ratio(s).unwrap()
    }

    #[test]
    fn q3_has_63_vertices() {
        let g = geometry_graph_params(&q(3)).unwrap();
        assert_eq!(g.vertex_count.exact, "63");
        assert_eq!(g.zeta.exact, "33554432/9");
        assert_eq!(g.d.exact, "1/384");
        assert!(g.validity_flags.iter().all(|f| !f.holds));
    }

    #[test]
    fn q_2_41() {
        let q41 = BigUint::one() << 41u32;
        let g = geometry_graph_params(&q41).unwrap();
        let q2 = BigUint::one() << 82u32;
        let expect = &q2 * (&q2 - (BigUint::one() << 41u32) + 1u32);
        assert_eq!(g.vertex_count.exact, expect.to_string());
        assert_eq!(g.zeta_exact, BigRational::new(1.into(), BigInt::one() << 57u32));
        assert!(g.all_flags_hold());
    }

    #[test]
    fn q_2_13() {
        let g = geometry_graph_params(&q(1 << 13)).unwrap();
        assert_eq!(g.zeta.exact, "1/2");
        assert_eq!(
            g.validity_flags.iter().map(|f| f.holds).collect::<Vec<_>>(),
            vec![false, true]
        );
    }

    #[test]
    fn q_below_two_is_rejected() {
        assert!(geometry_graph_params(&q(1)).is_err());
        assert!(no_sparse_host_params(&q(0), &q(1)).is_err());
        assert!(no_sparse_host_params(&q(1 << 20), &q(0)).is_err());
    }

    #[test]
    fn chain_at_q_2_41() {
        let q41 = BigUint::one() << 41u32;
        let h = no_sparse_host_params(&q41, &q(1)).unwrap();
        let c = h.chain.as_ref().unwrap();
        // by hand: ceil(8·1·128·2^41) = 2^51, ceil(log2 2^57) = 57
        assert_eq!(c.step_budget, BigUint::one() << 51u32);
        assert_eq!(c.round_budget, 57);
        assert_eq!(c.f, (BigUint::one() << 51u32) * 57u32);
        // N_q lies strictly between 2^163 and 2^164
        assert_eq!(c.ceil_log2_n, 164);
        assert_eq!(c.s, &c.f * 328u32);
        assert_eq!(h.t.as_ref().unwrap().exact, (&c.s * 2u32).to_string());
        assert_eq!(h.log_identity_holds, Some(true));
        assert!(h.validity_flags.iter().all(|f| f.holds));
        // p = f·log2(n)/(2e·ζ·n) with ζn ≈ 2^107
        let n = h.geometry.n_exact.to_f64().unwrap();
        let expect = (57.0 * 2f64.powi(51)) * n.log2() / (2.0 * std::f64::consts::E * n / 2f64.powi(57));
        assert!((c.p / expect - 1.0).abs() < 1e-9);
    }

    #[test]
    fn chain_recomputes_identically() {
        for (qq, dd) in [(1u64 << 13, 1u64), (1 << 20, 3), (12345, 2)] {
            let h = no_sparse_host_params(&q(qq), &q(dd)).unwrap();
            let g = geometry_graph_params(&q(qq)).unwrap();
            let direct = sparsifier_chain(&g.n_exact, &g.zeta_exact, &g.d_exact, &q(dd)).ok();
            assert_eq!(h.chain, direct);
            assert_eq!(
                serde_json::to_string(&h).unwrap(),
                serde_json::to_string(&no_sparse_host_params(&q(qq), &q(dd)).unwrap()).unwrap()
            );
        }
    }

    #[test]
    fn small_q_chain_is_flagged() {
        let h = no_sparse_host_params(&q(3), &q(1)).unwrap();
        assert!(h.chain.is_none());
        assert!(h.infeasible.is_some());
        assert_eq!(h.log_identity_holds, None);
    }

    #[test]
    fn log_identity_off_powers_of_two() {
        for qq in [5793u64, 6000, 10_000, 99_991] {
            let h = no_sparse_host_params(&q(qq), &q(1)).unwrap();
            assert_eq!(h.log_identity_holds, Some(true), "q = {qq}");
            let expect = (2.0 * (qq as f64).log2() - 25.0).ceil() as u64;
            assert_eq!(h.chain.unwrap().round_budget, expect);
        }
    }

    #[test]
    fn alpha_zero_and_half() {
        let s = erdos_rogers_shape(&q(1000), &r("0"), &r("1")).unwrap();
        assert_eq!(s.exponents, (r("1/3"), r("4/3")));
        assert!(s.validity_flags[0].holds);
        let s = erdos_rogers_shape(&q(1000), &r("1/2"), &r("1")).unwrap();
        assert_eq!(s.exponents, (r("1/2"), r("2")));
        assert!(!s.validity_flags[0].holds);
    }

    #[test]
    fn shape_at_a_million() {
        let s = erdos_rogers_shape(&q(1_000_000), &r("1/4"), &r("2")).unwrap();
        let n = 1e6f64;
        let t = n.powf(0.4) * n.log2().powf(1.6);
        assert!((s.t_value / t - 1.0).abs() < 1e-12);
        assert!((s.t_value - 30_148.545_5).abs() < 1e-3, "{}", s.t_value);
        let back: f64 = s.n_from_t.parse().unwrap();
        assert!((back / (t.powf(2.5) / t.log2().powi(4)) - 1.0).abs() < 1e-9);
        let degree: f64 = s.degree_bound.parse().unwrap();
        assert!((degree / (2.0 * t.powf(0.25)) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn alpha_out_of_range() {
        assert!(erdos_rogers_shape(&q(100), &r("-1/4"), &r("1")).is_err());
        assert!(erdos_rogers_shape(&q(100), &r("3/2"), &r("1")).is_err());
        assert!(erdos_rogers_shape(&q(1), &r("0"), &r("1")).is_err());
    }
}
