//! Exponent, threshold and inequality calculators in exact rational
//! arithmetic.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gluing::{leaf_extension, RootedPattern};
use crate::graph::Graph;

pub type Rational = BigRational;

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

fn int(v: usize) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Parses `"p/q"` or an integer.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let (num, den) = text.split_once('/').unwrap_or((text, "1"));
    let parse = |s: &str| {
        s.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::Parse(format!("bad rational {text:?}")))
    };
    let (num, den) = (parse(num)?, parse(den)?);
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {text:?}")));
    }
    Ok(Rational::new(num, den))
}

/// Always `"num/den"`, also for integers.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// `(α, A, η)`: goodness exponent, edge-count constant and copy-count
/// constant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoodnessParams {
    pub alpha: Rational,
    pub big_a: Rational,
    pub eta: Rational,
}

impl GoodnessParams {
    pub fn new(alpha: Rational, big_a: Rational, eta: Rational) -> Result<Self> {
        if alpha.is_negative() || alpha >= Rational::one() {
            return Err(Error::InfeasibleInput(format!("alpha {alpha} outside [0, 1)")));
        }
        if !big_a.is_positive() || !eta.is_positive() {
            return Err(Error::InfeasibleInput("A and eta must be positive".into()));
        }
        Ok(GoodnessParams { alpha, big_a, eta })
    }
}

/// `(h, e(H), ℓ, e(F))` for a pattern and a root forest.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PatternStats {
    pub h: usize,
    pub e_h: usize,
    pub ell: usize,
    pub e_f: usize,
}

impl PatternStats {
    pub fn new(h: usize, e_h: usize, ell: usize, e_f: usize) -> Result<Self> {
        if ell == 0 || ell >= h {
            return Err(Error::InfeasibleInput(format!("need 0 < ell = {ell} < h = {h}")));
        }
        if e_f >= e_h {
            return Err(Error::InfeasibleInput(format!("need e(F) = {e_f} < e(H) = {e_h}")));
        }
        Ok(PatternStats { h, e_h, ell, e_f })
    }

    pub fn of(p: &RootedPattern) -> Result<Self> {
        let (h, e_h, ell, e_f) = p.stats();
        PatternStats::new(h, e_h, ell, e_f)
    }
}

/// `(ℓ - 1) + (1 - e(F))(1 - α)`.
pub fn feasibility_value(ell: usize, e_f: usize, alpha: &Rational) -> Rational {
    int(ell) - Rational::one() + (Rational::one() - int(e_f)) * (Rational::one() - alpha)
}

/// True when `(v(F) - 1) + (1 - e(F))(1 - α) >= 1`.
pub fn feasibility_check(ell: usize, e_f: usize, alpha: &Rational) -> bool {
    feasibility_value(ell, e_f, alpha) >= Rational::one()
}

pub fn feasibility_check_graph(f: &Graph, alpha: &Rational) -> bool {
    feasibility_check(f.vertex_count(), f.edge_count(), alpha)
}

/// Value of a two-branch maximum and which branch attains it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentReport {
    pub value: Rational,
    /// 1 when the first branch is strictly larger, otherwise 2.
    pub branch: u8,
    pub first: Rational,
    pub second: Rational,
}

/// `α' = max{1 - (h-ℓ)/(e(H)-e(F)), 1 - (1-α)/((ℓ-1) + (1-e(F))(1-α))}`.
pub fn es_exponent_forest(alpha: &Rational, s: &PatternStats) -> Result<ExponentReport> {
    let d = feasibility_value(s.ell, s.e_f, alpha);
    if d < Rational::one() {
        return Err(Error::InfeasibleInput(format!(
            "(l - 1) + (1 - e(F))(1 - alpha) = {} < 1",
            format_rational(&d)
        )));
    }
    let one = Rational::one();
    let first = &one - int(s.h - s.ell) / int(s.e_h - s.e_f);
    let second = &one - (&one - alpha) / d;
    let (value, branch) = if first > second {
        (first.clone(), 1)
    } else {
        (second.clone(), 2)
    };
    Ok(ExponentReport {
        value,
        branch,
        first,
        second,
    })
}

/// `β = 4^{-e(H)} (η / (4 · 8^{e(H)} (6K)^{e(F)}))^s`.
pub fn es_beta(eta: &Rational, s: &PatternStats, k: &Rational, copies: usize) -> Result<Rational> {
    if !k.is_positive() || copies == 0 || !eta.is_positive() {
        return Err(Error::InfeasibleInput("need K > 0, eta > 0 and s >= 1".into()));
    }
    let four = int(4);
    let inner = eta / (&four * pow(&int(8), s.e_h) * pow(&(int(6) * k), s.e_f));
    Ok(pow(&inner, copies) / pow(&four, s.e_h))
}

fn pow(r: &Rational, e: usize) -> Rational {
    num_traits::pow(r.clone(), e)
}

/// `n^{n_exp} γ^{gamma_exp}` for one branch of the cleaning threshold.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Monomial {
    pub n_exp: String,
    pub gamma_exp: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThresholdReport {
    /// `g(n, H, F, ε, γ)` evaluated from its logarithm.
    pub value: f64,
    pub ln_value: f64,
    /// 1 or 2, the branch attaining the maximum.
    pub dominating_branch: u8,
    pub first: Monomial,
    pub second: Monomial,
}

/// `g = C max(n^{-(h-ℓ)/(e(H)-e(F))} γ^{-1/(e(H)-e(F))}, (nγ)^{(α-1)/((ℓ-1)+(1-α)(1-e(F)))})`.
///
/// Accepts `0 < γ <= 1`. Ties between the branches report branch 2.
pub fn cleaning_threshold(
    n: usize,
    s: &PatternStats,
    gamma: &Rational,
    alpha: &Rational,
    c: &Rational,
) -> Result<ThresholdReport> {
    if n == 0 {
        return Err(Error::InfeasibleInput("n must be positive".into()));
    }
    if !gamma.is_positive() || *gamma > Rational::one() {
        return Err(Error::InfeasibleInput(format!("gamma {gamma} outside (0, 1]")));
    }
    if !c.is_positive() {
        return Err(Error::InfeasibleInput("C must be positive".into()));
    }
    let d = feasibility_value(s.ell, s.e_f, alpha);
    if d < Rational::one() {
        return Err(Error::InfeasibleInput(format!(
            "(l - 1) + (1 - e(F))(1 - alpha) = {} < 1",
            format_rational(&d)
        )));
    }
    let gap = int(s.e_h - s.e_f);
    let n1 = -int(s.h - s.ell) / &gap;
    let g1 = -Rational::one() / &gap;
    let e2 = (alpha - Rational::one()) / d;
    let ln_n = (n as f64).ln();
    let ln_gamma = to_f64(gamma).ln();
    let a1 = to_f64(&n1) * ln_n + to_f64(&g1) * ln_gamma;
    let a2 = to_f64(&e2) * (ln_n + ln_gamma);
    let first_wins = if gamma.is_one() { n > 1 && n1 > e2 } else { a1 > a2 };
    let ln_value = to_f64(c).ln() + if first_wins { a1 } else { a2 };
    Ok(ThresholdReport {
        value: ln_value.exp(),
        ln_value,
        dominating_branch: if first_wins { 1 } else { 2 },
        first: Monomial {
            n_exp: format_rational(&n1),
            gamma_exp: format_rational(&g1),
        },
        second: Monomial {
            n_exp: format_rational(&e2),
            gamma_exp: format_rational(&e2),
        },
    })
}

/// `η' = η / 2^{3 e(H)}`.
pub fn eta_prime(eta: &Rational, e_h: usize) -> Rational {
    eta / pow(&int(2), 3 * e_h)
}

/// The threshold constant of the cleaning construction:
/// `max{((16A)^{ℓ-1} (8η'h)^{1-α})^{1/D}, 2^{1/(e(H)-e(F))}}` with
/// `D = (ℓ-1) + (1-e(F))(1-α)`.
pub fn cleaning_constant(params: &GoodnessParams, s: &PatternStats) -> Result<f64> {
    let d = feasibility_value(s.ell, s.e_f, &params.alpha);
    if d < Rational::one() {
        return Err(Error::InfeasibleInput("infeasible root forest".into()));
    }
    let ep = eta_prime(&params.eta, s.e_h);
    let alpha = to_f64(&params.alpha);
    let ln_first = ((s.ell - 1) as f64 * (16.0 * to_f64(&params.big_a)).ln()
        + (1.0 - alpha) * (8.0 * to_f64(&ep) * s.h as f64).ln())
        / to_f64(&d);
    let ln_second = std::f64::consts::LN_2 / (s.e_h - s.e_f) as f64;
    Ok(ln_first.max(ln_second).exp())
}

/// `2 - (v(F) - 2)/(e(F) - 1)`.
pub fn deletion_exponent(f: &Graph) -> Result<Rational> {
    let e = f.edge_count();
    if e < 2 {
        return Err(Error::TooFewEdges(e));
    }
    Ok(int(2) - (int(f.vertex_count()) - int(2)) / int(e - 1))
}

fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinomRatio {
    pub lower: Rational,
    pub exact: Rational,
    pub upper: Rational,
}

/// `q (q/2)^{s-1} <= C(n-s, qn-s) / C(n, qn) <= q^s`.
pub fn binom_ratio_bounds(n: usize, q: &Rational, s: usize) -> Result<BinomRatio> {
    let fail = |why: &str| Err(Error::PreconditionViolated(why.to_string()));
    if s == 0 {
        return fail("s >= 1");
    }
    if !q.is_positive() || *q > Rational::one() {
        return fail("0 < q <= 1");
    }
    let qn = q * int(n);
    if !qn.is_integer() {
        return fail("qn integral");
    }
    let qn = qn.to_integer().to_usize().expect("0 <= qn <= n");
    if qn < 2 * (s - 1) {
        return fail("qn >= 2(s - 1)");
    }
    if qn < s {
        return fail("qn >= s");
    }
    let exact = Rational::new(binomial(n - s, qn - s), binomial(n, qn));
    let lower = q * pow(&(q / int(2)), s - 1);
    let upper = pow(q, s);
    Ok(BinomRatio { lower, exact, upper })
}

/// Goodness exponent of a tree glued along its leaves: the forest exponent
/// of the leaf extension `T'` (a tree, so `α = 0`), which equals `1 - 1/r`
/// for a tree with `r` leaves.
pub fn tree_leaf_gluing_exponent(t: &Graph) -> Result<ExponentReport> {
    let p = leaf_extension(t)?;
    es_exponent_forest(&Rational::zero(), &PatternStats::of(&p)?)
}

/// Rational `m / n` reduced, for ratio tables.
pub fn ratio(m: usize, n: usize) -> Option<Rational> {
    (n > 0).then(|| Rational::new(BigInt::from(m), BigInt::from(n)))
}

/// `gcd`-free check that a rational times an integer is integral.
pub fn scales_to_integer(q: &Rational, n: usize) -> bool {
    (q.numer() * BigInt::from(n)).is_multiple_of(q.denom())
}
