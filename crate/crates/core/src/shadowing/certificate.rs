use serde::{Deserialize, Serialize};

use super::bounds::{
    chart_derivative_bounds, discriminant_ledger, second_derivative_bound, BoundLedger,
    ChartBounds, DerivativeChain,
};
use super::hyperbolic::{hyperbolicity, HyperbolicityData};
use super::{decimal, CertifyConfig, ShadowingError, MIN_BITS};
use crate::ball::{Ball, BallError, Precision};
use crate::surface::PseudoOrbit;

/// A ball stored both for reading (`decimal`) and exactly (`hex`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BallRecord {
    pub decimal: String,
    pub hex: String,
}

impl BallRecord {
    pub fn new(b: &Ball) -> BallRecord {
        BallRecord {
            decimal: b.to_decimal(20),
            hex: b.to_hex(),
        }
    }

    pub fn ball(&self, prec: Precision) -> Result<Ball, BallError> {
        Ball::from_hex(&self.hex, prec)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HypothesisCheck {
    pub pass: bool,
    pub detail: String,
}

impl HypothesisCheck {
    fn new(pass: bool, detail: String) -> HypothesisCheck {
        HypothesisCheck { pass, detail }
    }
}

/// The three hypotheses evaluated with one choice of the constant `C`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HypothesisSet {
    pub norm: String,
    pub c: BallRecord,
    /// The computed bound that `c` must dominate.
    pub c_computed: BallRecord,
    pub threshold: BallRecord,
    pub localization_radius: BallRecord,
    pub h1: HypothesisCheck,
    pub h2: HypothesisCheck,
    pub h3: HypothesisCheck,
    pub localization: HypothesisCheck,
}

impl HypothesisSet {
    pub fn pass(&self) -> bool {
        self.h1.pass && self.h2.pass && self.h3.pass && self.localization.pass
    }

    /// The first failing check, in the order residual, threshold, domain, conclusion.
    pub fn first_failure(&self) -> Option<(&'static str, &HypothesisCheck)> {
        [
            ("hypothesis (3)", &self.h3),
            ("hypothesis (2)", &self.h2),
            ("hypothesis (1)", &self.h1),
            ("localization", &self.localization),
        ]
        .into_iter()
        .find(|(_, c)| !c.pass)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShadowingCertificate {
    pub precision: u32,
    pub period: usize,
    pub parameter: BallRecord,
    pub residuals: Vec<BallRecord>,
    pub eps: BallRecord,
    pub eps_prime: BallRecord,
    pub delta: BallRecord,
    pub second_deriv_declared: BallRecord,
    pub second_deriv_certified: BallRecord,
    pub domain_radius: BallRecord,
    /// Lower bound of the discriminant on the chart neighbourhoods.
    pub domain_min: BallRecord,
    pub localization_target: BallRecord,
    /// `C` declared and dominated by `1/σ_min(L − I)` (Frobenius route).
    pub declared: HypothesisSet,
    /// `C` = block-sup operator norm bound of `(L − I)⁻¹`.
    pub block_sup: HypothesisSet,
    pub pass: bool,
}

impl ShadowingCertificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(s: &str) -> Result<ShadowingCertificate, serde_json::Error> {
        serde_json::from_str(s)
    }

    /// `Ok` when certified, otherwise the first failing check.
    pub fn verdict(&self) -> Result<(), ShadowingError> {
        for set in [&self.declared, &self.block_sup] {
            if let Some((name, check)) = set.first_failure() {
                return Err(ShadowingError::CertificationFailure {
                    check: format!("{name} [{} norm]", set.norm),
                    detail: check.detail.clone(),
                });
            }
        }
        Ok(())
    }

    pub fn max_residual(&self) -> Result<Ball, BallError> {
        let prec = Precision::new(self.precision)?;
        self.residuals
            .iter()
            .try_fold(Ball::zero(prec), |m, r| Ok(m.max(&r.ball(prec)?.abs())))
    }
}

struct Inputs {
    residuals: Vec<Ball>,
    eps: Ball,
    eps_prime: Ball,
    delta: Ball,
    d2_declared: Ball,
    d2_certified: Ball,
    domain_radius: Ball,
    domain_min: Ball,
    target: Ball,
}

fn evaluate(norm: &str, c: &Ball, c_computed: &Ball, inp: &Inputs) -> Result<HypothesisSet, BallError> {
    let prec = c.prec();
    let max_res = inp
        .residuals
        .iter()
        .fold(Ball::zero(prec), |m, r| m.max(&r.abs()));
    let c_ok = c_computed == c || c_computed.certainly_lt(c);
    let d2_ok = inp.d2_certified.certainly_lt(&inp.d2_declared);
    let d2 = &inp.d2_declared;

    let twelve_c = c.mul_i64(12);
    let first = inp.eps_prime.div(&twelve_c)?;
    let second = twelve_c.mul(&c.mul_i64(16)).mul(d2).recip()?;
    let threshold = first.neg().max(&second.neg()).neg();

    let h3 = HypothesisCheck::new(
        max_res.certainly_lt(&inp.delta),
        format!("max residual {} < delta {}", max_res.upper_f64(), inp.delta.mid_f64()),
    );
    let h2 = HypothesisCheck::new(
        c_ok && d2_ok && inp.delta.certainly_lt(&threshold),
        format!(
            "delta {} < threshold {:e} (C {} dominates {}: {c_ok}; D2 {:e} dominates {:e}: {d2_ok})",
            inp.delta.mid_f64(),
            threshold.lower_f64(),
            c.mid_f64(),
            c_computed.upper_f64(),
            d2.mid_f64(),
            inp.d2_certified.upper_f64()
        ),
    );

    let half_domain = inp.domain_radius.mul_pow2(-1);
    let sqrt2 = Ball::from_i64(2, prec).sqrt()?;
    let image = inp.eps_prime.mul(&sqrt2).mul(d2);
    let ball_ok = twelve_c.mul(&inp.delta).certainly_lt(&inp.eps_prime);
    let nested = inp.eps_prime.certainly_lt(&inp.eps);
    let image_ok = image.certainly_lt(&half_domain);
    let res_ok = max_res.certainly_lt(&half_domain);
    let domain_ok = inp.domain_min.is_positive();
    let h1 = HypothesisCheck::new(
        c_ok && d2_ok && ball_ok && nested && image_ok && res_ok && domain_ok,
        format!(
            "12C·delta < eps': {ball_ok}; eps' < eps: {nested}; eps'·√2·D2 = {:e} < {:e}: {image_ok}; \
             residual < {:e}: {res_ok}; discriminant > 0 on chart domains: {domain_ok}",
            image.upper_f64(),
            half_domain.mid_f64(),
            half_domain.mid_f64()
        ),
    );

    let radius = c.mul_i64(6).mul(&inp.delta);
    let localization = HypothesisCheck::new(
        radius.certainly_lt(&inp.target),
        format!("6C·delta = {:e} < {:e}", radius.upper_f64(), inp.target.mid_f64()),
    );
    Ok(HypothesisSet {
        norm: norm.to_string(),
        c: BallRecord::new(c),
        c_computed: BallRecord::new(c_computed),
        threshold: BallRecord::new(&threshold),
        localization_radius: BallRecord::new(&radius),
        h1,
        h2,
        h3,
        localization,
    })
}

/// Every intermediate object of a certification run.
#[derive(Clone, Debug)]
pub struct Certification {
    pub ledger: BoundLedger,
    pub charts: ChartBounds,
    pub chain: DerivativeChain,
    pub hyperbolicity: HyperbolicityData,
    pub certificate: ShadowingCertificate,
}

impl Certification {
    pub fn run(orbit: &PseudoOrbit, cfg: &CertifyConfig) -> Result<Certification, ShadowingError> {
        let prec = orbit.prec();
        if prec.bits() < MIN_BITS {
            return Err(ShadowingError::InsufficientPrecision { bits: prec.bits(), min: MIN_BITS });
        }
        let ledger = discriminant_ledger(orbit, cfg)?;
        let charts = chart_derivative_bounds(orbit, &ledger, cfg)?;
        let chain = second_derivative_bound(orbit, &ledger, &charts)?;
        let hyperbolicity = hyperbolicity(orbit)?;
        let inputs = Inputs {
            residuals: orbit.residuals()?,
            eps: ledger.eps.clone(),
            eps_prime: decimal(cfg.eps_prime, prec),
            delta: decimal(cfg.delta, prec),
            d2_declared: decimal(cfg.second_deriv_declared, prec),
            d2_certified: chain.certified(),
            domain_radius: ledger.domain_radius.clone(),
            domain_min: ledger.domain_min.clone(),
            target: decimal(cfg.localization_target, prec),
        };
        let declared = evaluate(
            "spectral",
            &decimal(cfg.c_declared, prec),
            &hyperbolicity.c_bound,
            &inputs,
        )?;
        let block_sup = evaluate(
            "block-sup",
            &hyperbolicity.block_sup_lemma,
            &hyperbolicity.block_sup_lemma,
            &inputs,
        )?;
        let certificate = ShadowingCertificate {
            precision: prec.bits(),
            period: orbit.period(),
            parameter: BallRecord::new(&orbit.parameter),
            residuals: inputs.residuals.iter().map(BallRecord::new).collect(),
            eps: BallRecord::new(&inputs.eps),
            eps_prime: BallRecord::new(&inputs.eps_prime),
            delta: BallRecord::new(&inputs.delta),
            second_deriv_declared: BallRecord::new(&inputs.d2_declared),
            second_deriv_certified: BallRecord::new(&inputs.d2_certified),
            domain_radius: BallRecord::new(&inputs.domain_radius),
            domain_min: BallRecord::new(&inputs.domain_min),
            localization_target: BallRecord::new(&inputs.target),
            pass: declared.pass() && block_sup.pass(),
            declared,
            block_sup,
        };
        Ok(Certification {
            ledger,
            charts,
            chain,
            hyperbolicity,
            certificate,
        })
    }
}

pub fn certify(orbit: &PseudoOrbit, cfg: &CertifyConfig) -> Result<ShadowingCertificate, ShadowingError> {
    Ok(Certification::run(orbit, cfg)?.certificate)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RecheckReport {
    pub pass: bool,
    /// Recorded verdicts that the replay does not reproduce.
    pub mismatches: Vec<String>,
}

/// Replay the inequalities of a certificate from its stored balls.
pub fn recheck(cert: &ShadowingCertificate) -> Result<RecheckReport, ShadowingError> {
    let prec = Precision::new(cert.precision)?;
    let b = |r: &BallRecord| r.ball(prec);
    let inputs = Inputs {
        residuals: cert.residuals.iter().map(b).collect::<Result<_, _>>()?,
        eps: b(&cert.eps)?,
        eps_prime: b(&cert.eps_prime)?,
        delta: b(&cert.delta)?,
        d2_declared: b(&cert.second_deriv_declared)?,
        d2_certified: b(&cert.second_deriv_certified)?,
        domain_radius: b(&cert.domain_radius)?,
        domain_min: b(&cert.domain_min)?,
        target: b(&cert.localization_target)?,
    };
    let mut mismatches = Vec::new();
    let mut pass = true;
    for stored in [&cert.declared, &cert.block_sup] {
        let replay = evaluate(&stored.norm, &b(&stored.c)?, &b(&stored.c_computed)?, &inputs)?;
        let pairs = [
            ("hypothesis (1)", &stored.h1, &replay.h1),
            ("hypothesis (2)", &stored.h2, &replay.h2),
            ("hypothesis (3)", &stored.h3, &replay.h3),
            ("localization", &stored.localization, &replay.localization),
        ];
        for (name, s, r) in pairs {
            if s.pass != r.pass {
                mismatches.push(format!("{name} [{} norm]: recorded {}, replayed {}", stored.norm, s.pass, r.pass));
            }
        }
        if replay.threshold != stored.threshold {
            mismatches.push(format!("threshold [{} norm] differs", stored.norm));
        }
        pass &= replay.pass();
    }
    if pass != cert.pass {
        mismatches.push(format!("overall verdict: recorded {}, replayed {pass}", cert.pass));
    }
    Ok(RecheckReport {
        pass: pass && mismatches.is_empty(),
        mismatches,
    })
}
