//! Assembly of the uniform-gap certificate.
//!
//! For an edge between vertices of degrees `d_L`, `d_R` the overlap of the
//! two subvolume ground-state projectors is controlled by
//! `delta_{d_L,d_R}(n)`, built from `b(d,n) = 4 a(n) |E_L|_inf / q_L`.
//! A graph of maximal degree `Delta` is certified gapped once
//! `max delta < 1/Delta` with every edge passing the injectivity condition
//! `max{b_L, b_R, b_L b_R / 4a} < 1`. Two evaluation modes exist: `exact`
//! uses the exact transfer quantities, `bound` replays the closed-form-bound
//! path that yields the published decoration thresholds (for degrees up to 4
//! that path uses the exact small-degree table). Everything irrational is
//! carried in outward-rounded intervals, and precision escalates until the
//! verdict-relevant comparison is decided or the cap is reached.

use crate::interval::{ln2, ln3, sqrt3, Interval, MAX_PRECISION, MIN_PRECISION};
use crate::numbers::{binomial, format_q, pow2, q, q_from_int, q_pow, Q};
use crate::transfer;
use crate::{dense, Error, Result};
use num_traits::Zero;
use std::collections::BTreeMap;

/// How the transfer quantities entering `b(d,n)` are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Exact `q_L` and `|E_L|_inf^2`.
    Exact,
    /// Closed-form bounds for degrees above 4, the exact table below.
    Bound,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Mode::Exact => write!(f, "exact"),
            Mode::Bound => write!(f, "bound"),
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Mode::Exact),
            "bound" => Ok(Mode::Bound),
            other => Err(Error::Domain(format!("unknown mode '{other}'"))),
        }
    }
}

/// Tri-state outcome of a certified comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Injectivity {
    Certified,
    Failed,
    /// The enclosing intervals straddle the threshold at this precision.
    Undecided,
}

/// The per-degree bound ingredient `b(d, n)`.
#[derive(Debug, Clone)]
pub struct EdgeBound {
    pub d: u32,
    pub n: u32,
    pub mode: Mode,
    /// Enclosure of `b(d,n)`; infinite when `q_L` could not be certified
    /// positive.
    pub b: Interval,
    pub ql_positive: bool,
}

fn el_and_ql(d: u32, n: u32, mode: Mode, prec: u32) -> Result<(Interval, Interval, bool)> {
    let use_exact = mode == Mode::Exact || d <= 4;
    if use_exact {
        let (ql, _) = transfer::ql_exact(d, n)?;
        let (el_sq, _) = transfer::el_inf_norm_sq(d, n)?;
        let positive = ql > Q::zero();
        let el = Interval::from_q(&el_sq, prec).sqrt()?;
        Ok((el, Interval::from_q(&ql, prec), positive))
    } else {
        let ql = transfer::ql_lower_bound(d, n, prec)?;
        let positive = ql.ge_q(&q(0)) && !ql.contains_q(&q(0));
        let el_sq = match transfer::el_inf_upper_bound_sq(d, n, prec) {
            Ok(b) => b,
            Err(Error::Domain(_)) => {
                // below the invertibility threshold the bound path is void
                return Ok((Interval::infinite(prec), ql, false));
            }
            Err(e) => return Err(e),
        };
        let el = Interval::from_q(&el_sq, prec).sqrt()?;
        Ok((el, ql, positive))
    }
}

/// `b(d,n) = 4 a(n) |E_L|_inf / q_L` in the requested mode.
pub fn b_new(d: u32, n: u32, mode: Mode, prec: u32) -> Result<EdgeBound> {
    if d < 1 {
        return Err(Error::Domain("vertex degree must be >= 1".into()));
    }
    let (el, ql, ql_positive) = el_and_ql(d, n, mode, prec)?;
    let b = if ql_positive {
        let four_a = Interval::from_q(&(q(4) * transfer::a_rate(n)), prec);
        four_a.mul(&el).div(&ql)?
    } else {
        Interval::infinite(prec)
    };
    Ok(EdgeBound {
        d,
        n,
        mode,
        b,
        ql_positive,
    })
}

/// Certified evaluation of the per-edge estimate.
#[derive(Debug, Clone)]
pub struct DeltaOutcome {
    pub delta: Interval,
    pub injectivity: Injectivity,
}

fn injectivity_of(bl: &Interval, br: &Interval, four_a: &Interval) -> Result<Injectivity> {
    if bl.is_infinite() || br.is_infinite() {
        return Ok(Injectivity::Failed);
    }
    let cross = bl.mul(br).div(four_a)?;
    let one = q(1);
    let all_below = bl.lt_q(&one) && br.lt_q(&one) && cross.lt_q(&one);
    if all_below {
        return Ok(Injectivity::Certified);
    }
    let any_at_or_above = bl.ge_q(&one) || br.ge_q(&one) || cross.ge_q(&one);
    if any_at_or_above {
        Ok(Injectivity::Failed)
    } else {
        Ok(Injectivity::Undecided)
    }
}

fn delta_formula(
    bl: &Interval,
    br: &Interval,
    four_a: &Interval,
    prec: u32,
) -> Result<Interval> {
    let one = Interval::from_i64(1, prec);
    let gl = one.sub(bl);
    let gr = one.sub(br);
    let prod = gl.mul(&gr);
    let first = one.div(&prod.sqrt()?)?;
    let second = four_a.add(&bl.mul(br)).div(&prod)?;
    Ok(four_a.mul(&first.add(&second)))
}

/// The edge estimate `delta_{d_L,d_R}(n)` with its injectivity condition.
///
/// A failed or undecided injectivity condition yields an infinite interval:
/// the method then asserts nothing about this edge.
pub fn delta_new(d_l: u32, d_r: u32, n: u32, mode: Mode, prec: u32) -> Result<DeltaOutcome> {
    let bl = b_new(d_l, n, mode, prec)?;
    let br = if d_r == d_l {
        bl.clone()
    } else {
        b_new(d_r, n, mode, prec)?
    };
    let four_a = Interval::from_q(&(q(4) * transfer::a_rate(n)), prec);
    let injectivity = injectivity_of(&bl.b, &br.b, &four_a)?;
    let delta = if injectivity == Injectivity::Certified {
        delta_formula(&bl.b, &br.b, &four_a, prec)?
    } else {
        Interval::infinite(prec)
    };
    Ok(DeltaOutcome { delta, injectivity })
}

/// `F_{d-1}(x) = sum_r C(d-1, 2r) x^{2r}/(2r+1)`, exact.
pub fn f_poly(d: u32, x: &Q) -> Result<Q> {
    if d < 2 {
        return Err(Error::Domain(format!("polynomial needs d >= 2, got {d}")));
    }
    let m = i64::from(d) - 1;
    let mut acc = Q::zero();
    let mut r = 0i64;
    while 2 * r <= m {
        acc += q_from_int(binomial(m, 2 * r)) * q_pow(x, 2 * r) / q(2 * r + 1);
        r += 1;
    }
    Ok(acc)
}

/// The decreasing function controlling the threshold:
/// `f(d) = 3 (2 + (1 + 4^{-d})^{d-1}) / (4 - (1 + sqrt(3)/2^d)^{d-1})^2`.
pub fn f_function(d: u32, prec: u32) -> Result<Interval> {
    if d < 3 {
        return Err(Error::Domain(format!("f(d) needs d >= 3, got {d}")));
    }
    let one = Interval::from_i64(1, prec);
    let di = i64::from(d);
    let numer_inner = q(1) + pow2(-2 * di);
    let numer = q(3) * (q(2) + q_pow(&numer_inner, di - 1));
    let s3 = sqrt3(prec).mul_q(&pow2(-di));
    let denom = Interval::from_i64(4, prec).sub(&one.add(&s3).powi(d - 1));
    if !denom.ge_q(&q(0)) || denom.contains_q(&q(0)) {
        return Err(Error::Numerical(format!(
            "threshold denominator not certified positive at d = {d}"
        )));
    }
    Interval::from_q(&numer, prec).div(&denom.mul(&denom))
}

/// The decoration threshold `n(d)`: exactly `d` for `d <= 4`, else
/// `(ln 2 * d + ln f(d)) / ln 3`. Returns `(n(d), f(d))`.
pub fn threshold_n(d: u32, prec: u32) -> Result<(Interval, Interval)> {
    if d < 3 {
        return Err(Error::Domain(format!(
            "the threshold is stated for degrees >= 3, got {d}"
        )));
    }
    let f = f_function(d, prec)?;
    if d <= 4 {
        return Ok((Interval::from_i64(i64::from(d), prec), f));
    }
    let n = ln2(prec)
        .mul(&Interval::from_i64(i64::from(d), prec))
        .add(&f.ln()?)
        .div(&ln3(prec))?;
    Ok((n, f))
}

/// Smallest integer decoration certified to satisfy `n >= n(d)`.
pub fn threshold_decoration(d: u32, prec: u32) -> Result<u32> {
    let (t, _) = threshold_n(d, prec)?;
    if d <= 4 {
        return Ok(d);
    }
    for n in 0..=64u32 {
        if *t.hi() <= i64::from(n) {
            return Ok(n);
        }
    }
    Err(Error::Numerical(
        "decoration threshold did not resolve below n = 64".into(),
    ))
}

/// Which norm flavor a bound pair was built with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flavor {
    /// Schatten-∞ norms (the tighter route).
    SchattenInf,
    /// Norms induced by the operator norm (the older route).
    OperatorNorm,
}

/// The pair `b_L, b_R` and the cross quantity `b_LR` of one flavor.
#[derive(Debug, Clone)]
pub struct BoundPair {
    pub b_l: Interval,
    pub b_r: Interval,
    pub b_lr: Interval,
    pub flavor: Flavor,
    pub defined: bool,
}

/// Schatten-∞-flavor pair at equal degrees: `b_L = b_R = b(d,n)` and
/// `b_LR = b^2/(4a)`.
pub fn b_new_pair(d: u32, n: u32, prec: u32) -> Result<BoundPair> {
    let eb = b_new(d, n, Mode::Exact, prec)?;
    let four_a = Interval::from_q(&(q(4) * transfer::a_rate(n)), prec);
    let defined = eb.ql_positive;
    let b_lr = if defined {
        eb.b.mul(&eb.b).div(&four_a)?
    } else {
        Interval::infinite(prec)
    };
    Ok(BoundPair {
        b_l: eb.b.clone(),
        b_r: eb.b,
        b_lr,
        flavor: Flavor::SchattenInf,
        defined,
    })
}

/// Operator-norm-flavor quantities, all exact rationals:
/// `b_L = 8 a |E_L|_op / q_L`, `b_R = 4 a |E_R|_op / q_R` with
/// `q_R = q_L / 2` and `|E_R|_op = (d+1)/2`, and `b_LR = b_L b_R / (8a)`.
pub fn b_old_exact(d: u32, n: u32) -> Result<(Q, Q, Q, bool)> {
    let (ql, _) = transfer::ql_exact(d, n)?;
    if ql <= Q::zero() {
        return Ok((Q::zero(), Q::zero(), Q::zero(), false));
    }
    let a = transfer::a_rate(n);
    let el_op = transfer::el_op_norm(d, n)?;
    let er_op = transfer::er_op_norm(d);
    let qr = &ql / q(2);
    let b_l = q(8) * &a * el_op / &ql;
    let b_r = q(4) * &a * er_op / qr;
    let b_lr = &b_l * &b_r / (q(8) * &a);
    Ok((b_l, b_r, b_lr, true))
}

/// Operator-norm-flavor pair as intervals.
pub fn b_old(d: u32, n: u32, prec: u32) -> Result<BoundPair> {
    let (b_l, b_r, b_lr, defined) = b_old_exact(d, n)?;
    if !defined {
        return Ok(BoundPair {
            b_l: Interval::infinite(prec),
            b_r: Interval::infinite(prec),
            b_lr: Interval::infinite(prec),
            flavor: Flavor::OperatorNorm,
            defined,
        });
    }
    Ok(BoundPair {
        b_l: Interval::from_q(&b_l, prec),
        b_r: Interval::from_q(&b_r, prec),
        b_lr: Interval::from_q(&b_lr, prec),
        flavor: Flavor::OperatorNorm,
        defined,
    })
}

/// The older edge estimate
/// `delta^op = 4a [ 1/sqrt((1-b_L)(1-b_R)) + 4a (1 + b_LR) / ((1-b_L)(1-b_R)) ]`.
pub fn delta_old(d_l: u32, d_r: u32, n: u32, prec: u32) -> Result<DeltaOutcome> {
    let (bl_l, _, _, def_l) = b_old_exact(d_l, n)?;
    let (_, br_r, _, def_r) = b_old_exact(d_r, n)?;
    if !(def_l && def_r) {
        return Ok(DeltaOutcome {
            delta: Interval::infinite(prec),
            injectivity: Injectivity::Failed,
        });
    }
    let a = transfer::a_rate(n);
    let b_lr = &bl_l * &br_r / (q(8) * &a);
    let one = q(1);
    if !(bl_l < one && br_r < one && b_lr < one) {
        return Ok(DeltaOutcome {
            delta: Interval::infinite(prec),
            injectivity: Injectivity::Failed,
        });
    }
    let bl = Interval::from_q(&bl_l, prec);
    let br = Interval::from_q(&br_r, prec);
    let four_a = Interval::from_q(&(q(4) * &a), prec);
    let one_iv = Interval::from_i64(1, prec);
    let prod = one_iv.sub(&bl).mul(&one_iv.sub(&br));
    let first = one_iv.div(&prod.sqrt()?)?;
    let second = four_a
        .mul(&one_iv.add(&Interval::from_q(&b_lr, prec)))
        .div(&prod)?;
    Ok(DeltaOutcome {
        delta: four_a.mul(&first.add(&second)),
        injectivity: Injectivity::Certified,
    })
}

/// Side-by-side evaluation of the two flavors on a regular graph of degree
/// `d`, for the dominance comparison.
#[derive(Debug, Clone)]
pub struct FlavorComparison {
    pub d: u32,
    pub n: u32,
    pub new_pair: BoundPair,
    pub old_pair: BoundPair,
    pub delta_new: DeltaOutcome,
    pub delta_old: DeltaOutcome,
    /// `Some(true)` when both flavors are defined and the newer bound is
    /// certified strictly smaller (both in `delta` and in `b_LR`).
    pub strictly_tighter: Option<bool>,
}

pub fn compare_flavors(d: u32, n: u32, prec: u32) -> Result<FlavorComparison> {
    let new_pair = b_new_pair(d, n, prec)?;
    let old_pair = b_old(d, n, prec)?;
    let dn = delta_new(d, d, n, Mode::Exact, prec)?;
    let dod = delta_old(d, d, n, prec)?;
    let both_defined = dn.injectivity == Injectivity::Certified
        && dod.injectivity == Injectivity::Certified;
    let strictly_tighter = if both_defined {
        Some(
            dn.delta.definitely_lt(&dod.delta)
                && new_pair.b_lr.definitely_lt(&old_pair.b_lr),
        )
    } else {
        None
    };
    Ok(FlavorComparison {
        d,
        n,
        new_pair,
        old_pair,
        delta_new: dn,
        delta_old: dod,
        strictly_tighter,
    })
}

/// One provenance record: a quantity, its value, and how it was obtained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    pub quantity: String,
    pub value: String,
    pub source: String,
}

/// Overall verdict of a certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Gapped,
    NotCertified,
    /// The decisive comparison stayed undecided at the precision cap.
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Gapped => write!(f, "gapped"),
            Verdict::NotCertified => write!(f, "not-certified-gapped"),
            Verdict::Inconclusive => write!(f, "inconclusive"),
        }
    }
}

/// The certificate: verdict, the quantities it rests on, and where each came
/// from. Degrees 1 and 2 are excluded from the per-edge table: they reduce
/// to the unadorned chain results and impose no new condition.
#[derive(Debug, Clone)]
pub struct GapCertificate {
    pub delta_max: u32,
    pub n: u32,
    pub mode: Mode,
    pub variable_decoration: bool,
    pub injectivity_ok: bool,
    pub epsilon_upper: Interval,
    /// `1/delta_max`, the comparison threshold.
    pub threshold: Q,
    pub verdict: Verdict,
    pub gapped: bool,
    pub precision_bits: u32,
    /// Numeric gap prefactor `1/2 min_d gap(H_star) (1 - Delta eps)`;
    /// floating point, explicitly not certified.
    pub gamma_lower: Option<f64>,
    pub per_edge: BTreeMap<(u32, u32), DeltaOutcome>,
    pub provenance: Vec<Provenance>,
}

impl GapCertificate {
    /// The soundness chain every certificate must satisfy.
    pub fn is_sound(&self) -> bool {
        if self.gapped {
            self.injectivity_ok
                && self.epsilon_upper.lt_q(&self.threshold)
                && self.verdict == Verdict::Gapped
        } else {
            self.verdict != Verdict::Gapped
        }
    }
}

fn provenance_for(d: u32, n: u32, mode: Mode, prec: u32, out: &mut Vec<Provenance>) -> Result<()> {
    let use_exact = mode == Mode::Exact || d <= 4;
    if use_exact {
        let (ql, argmin) = transfer::ql_exact(d, n)?;
        let (el_sq, branch) = transfer::el_inf_norm_sq(d, n)?;
        out.push(Provenance {
            quantity: format!("q_L({d},{n})"),
            value: format_q(&ql),
            source: format!("exact sector minimum, attained at total spin {argmin}"),
        });
        out.push(Provenance {
            quantity: format!("|E_L({d},{n})|_inf^2"),
            value: format_q(&el_sq),
            source: format!("exact squared norm, {branch} branch"),
        });
    } else {
        let ql = transfer::ql_lower_bound(d, n, prec)?;
        out.push(Provenance {
            quantity: format!("q_L({d},{n})"),
            value: ql.to_string(),
            source: "closed-form lower bound (outward-rounded)".into(),
        });
        match transfer::el_inf_upper_bound_sq(d, n, prec) {
            Ok(el) => out.push(Provenance {
                quantity: format!("|E_L({d},{n})|_inf^2"),
                value: format_q(&el),
                source: "closed-form upper bound".into(),
            }),
            Err(_) => out.push(Provenance {
                quantity: format!("|E_L({d},{n})|_inf^2"),
                value: "undefined".into(),
                source: "below the invertibility threshold".into(),
            }),
        }
    }
    Ok(())
}

/// Builds the certificate for maximal degree `delta_max` at uniform
/// decoration `n`.
pub fn certify(
    delta_max: u32,
    n: u32,
    mode: Mode,
    with_prefactor: bool,
    precision: u32,
) -> Result<GapCertificate> {
    if delta_max < 3 {
        return Err(Error::Domain(format!(
            "certification needs a maximal degree >= 3, got {delta_max}"
        )));
    }
    let precision = precision.max(MIN_PRECISION);
    let threshold = q(1) / q(i64::from(delta_max));
    let mut prec = precision;
    loop {
        let mut per_edge = BTreeMap::new();
        let mut all_injective = true;
        for d_l in 3..=delta_max {
            for d_r in d_l..=delta_max {
                let outcome = delta_new(d_l, d_r, n, mode, prec)?;
                if outcome.injectivity != Injectivity::Certified {
                    all_injective = false;
                }
                // the estimate is symmetric; record both orientations
                per_edge.insert((d_r, d_l), outcome.clone());
                per_edge.insert((d_l, d_r), outcome);
            }
        }
        let epsilon = per_edge
            .values()
            .map(|o| o.delta.clone())
            .reduce(|a, b| a.max(&b))
            .expect("at least one degree pair");
        let decided_gapped = all_injective && epsilon.lt_q(&threshold);
        let injectivity_failed = per_edge
            .values()
            .any(|o| o.injectivity == Injectivity::Failed);
        let decided_not = epsilon.ge_q(&threshold) || injectivity_failed;
        if !(decided_gapped || decided_not) && prec < MAX_PRECISION {
            prec = (prec * 2).min(MAX_PRECISION);
            continue;
        }
        let verdict = if decided_gapped {
            Verdict::Gapped
        } else if decided_not {
            Verdict::NotCertified
        } else {
            Verdict::Inconclusive
        };
        let mut provenance = vec![Provenance {
            quantity: "a(n)".into(),
            value: format_q(&transfer::a_rate(n)),
            source: "decorated-chain contraction rate 3^-n".into(),
        }];
        for d in 3..=delta_max {
            provenance_for(d, n, mode, prec, &mut provenance)?;
        }
        provenance.push(Provenance {
            quantity: "degree scope".into(),
            value: format!("3..={delta_max}"),
            source: "degrees 1 and 2 reduce to chain results and impose no new condition"
                .into(),
        });
        let gamma_lower = if with_prefactor && verdict == Verdict::Gapped {
            match star_prefactor(delta_max, n, &epsilon, &threshold) {
                Ok(g) => Some(g),
                Err(Error::Resource(msg)) => {
                    provenance.push(Provenance {
                        quantity: "gamma_lower".into(),
                        value: "unavailable".into(),
                        source: format!("star spectrum out of reach: {msg}"),
                    });
                    None
                }
                Err(e) => return Err(e),
            }
        } else {
            None
        };
        if let Some(g) = gamma_lower {
            provenance.push(Provenance {
                quantity: "gamma_lower".into(),
                value: format!("{g}"),
                source: "numeric star gaps; floating point, not certified".into(),
            });
        }
        let cert = GapCertificate {
            delta_max,
            n,
            mode,
            variable_decoration: false,
            injectivity_ok: all_injective,
            epsilon_upper: epsilon,
            threshold,
            verdict,
            gapped: verdict == Verdict::Gapped,
            precision_bits: prec,
            gamma_lower,
            per_edge,
            provenance,
        };
        assert!(cert.is_sound(), "certificate soundness chain violated");
        return Ok(cert);
    }
}

/// Certificate for edge-dependent decoration: every quantity only improves
/// under extra decoration (the chain map has unit norm and the rate `a`
/// decreases), so the verdict at the minimal decoration covers the whole
/// family.
pub fn certify_variable(
    delta_max: u32,
    n_min: u32,
    mode: Mode,
    with_prefactor: bool,
    precision: u32,
) -> Result<GapCertificate> {
    let mut cert = certify(delta_max, n_min, mode, with_prefactor, precision)?;
    cert.variable_decoration = true;
    cert.provenance.insert(
        0,
        Provenance {
            quantity: "variable decoration".into(),
            value: format!("min edge decoration {n_min}"),
            source:
                "uniform-decoration reduction: per-edge quantities only improve with extra decoration"
                    .into(),
        },
    );
    Ok(cert)
}

fn star_prefactor(delta_max: u32, n: u32, epsilon: &Interval, threshold: &Q) -> Result<f64> {
    let mut min_gap = f64::INFINITY;
    for d in 3..=delta_max {
        let s = dense::star::star_hamiltonian(d, n)?;
        min_gap = min_gap.min(s.gap);
    }
    // 1/2 * min gap * (1 - Delta * eps_hi), evaluated in floating point
    let delta_f = crate::numbers::q_to_f64(&(q(1) / threshold));
    Ok(0.5 * min_gap * (1.0 - delta_f * epsilon.hi_f64()))
}
