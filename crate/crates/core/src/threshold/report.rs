use serde::Serialize;

use super::amplitude::{solve_amplitude_threshold, ThresholdMode};
use super::audit::AuditEntry;
use super::bootstrap::{bootstrap_sizes, InitialNorms};
use super::constants::bound_constants;
use super::params::{ModelCase, NormParams};
use super::rates::rate_factor;
use crate::error::Result;
use crate::fmt::{ser_sig, ser_sig_opt};

/// Every explicit constant, rate factor, threshold and bootstrap size for one
/// parameter choice. Serializes with one key per quantity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstantReport {
    pub params: NormParams,
    pub case: ModelCase,
    #[serde(serialize_with = "ser_sig")]
    pub c_st: f64,
    #[serde(serialize_with = "ser_sig")]
    pub c_ch1: f64,
    #[serde(serialize_with = "ser_sig")]
    pub c_ch2: f64,
    #[serde(serialize_with = "ser_sig")]
    pub c_ch3: f64,
    #[serde(serialize_with = "ser_sig")]
    pub c_fl1: f64,
    #[serde(serialize_with = "ser_sig")]
    pub c_fl2: f64,
    #[serde(serialize_with = "ser_sig")]
    pub c_fl3: f64,
    #[serde(serialize_with = "ser_sig")]
    pub c_hl: f64,
    #[serde(serialize_with = "ser_sig")]
    pub c_l: f64,
    /// Only defined for `α > 0`.
    #[serde(serialize_with = "ser_sig_opt")]
    pub r1: Option<f64>,
    /// Only defined when `ε > 1/3`.
    #[serde(serialize_with = "ser_sig_opt")]
    pub r2: Option<f64>,
    #[serde(serialize_with = "ser_sig_opt")]
    pub r3: Option<f64>,
    pub mode: ThresholdMode,
    /// `lambda_paper` or `lambda_sharp`, whichever `mode` selects.
    #[serde(serialize_with = "ser_sig")]
    pub lambda: f64,
    #[serde(serialize_with = "ser_sig")]
    pub lambda_paper: f64,
    #[serde(serialize_with = "ser_sig")]
    pub lambda_sharp: f64,
    pub sharp_bracket_flag: bool,
    #[serde(serialize_with = "ser_sig_opt")]
    pub q: Option<f64>,
    #[serde(serialize_with = "ser_sig_opt")]
    pub q_inf: Option<f64>,
    #[serde(serialize_with = "ser_sig_opt")]
    pub k: Option<f64>,
    #[serde(serialize_with = "ser_sig_opt")]
    pub k_inf: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub audit: Option<Vec<AuditEntryOut>>,
}

/// [`AuditEntry`] with rounded numbers for emission.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditEntryOut {
    pub inequality: String,
    #[serde(serialize_with = "ser_sig")]
    pub lhs: f64,
    #[serde(serialize_with = "ser_sig")]
    pub rhs: f64,
    pub pass: bool,
}

impl From<&AuditEntry> for AuditEntryOut {
    fn from(e: &AuditEntry) -> Self {
        AuditEntryOut { inequality: e.inequality.clone(), lhs: e.lhs, rhs: e.rhs, pass: e.pass }
    }
}

impl ConstantReport {
    pub fn attach_audit(&mut self, entries: &[AuditEntry]) {
        self.audit = Some(entries.iter().map(AuditEntryOut::from).collect());
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

pub fn constant_report(
    p: &NormParams,
    case: &ModelCase,
    mode: ThresholdMode,
    norms: Option<&InitialNorms>,
) -> Result<ConstantReport> {
    p.validate_for(case)?;
    let c = bound_constants(p)?;
    let (r1, r3) = if case.alpha > 0.0 {
        let r1 = rate_factor(p, &ModelCase { coupled: false, ..*case })?.value;
        let r3 = rate_factor(p, &ModelCase { coupled: true, ..*case })?.value;
        (Some(r1), Some(r3))
    } else {
        (None, None)
    };
    let r2 = if p.eps > 1.0 / 3.0 {
        Some(rate_factor(p, &ModelCase { alpha: 0.0, coupled: case.coupled })?.value)
    } else {
        None
    };
    let paper = solve_amplitude_threshold(&c, p, case, ThresholdMode::PaperSplit)?;
    let sharp = solve_amplitude_threshold(&c, p, case, ThresholdMode::Sharp)?;
    let (mut q, mut q_inf, mut k, mut k_inf) = (None, None, None, None);
    if let Some(norms) = norms {
        let b = bootstrap_sizes(norms, case)?;
        if case.coupled {
            k = Some(b.size);
            k_inf = Some(b.size_inf);
        } else {
            q = Some(b.size);
            q_inf = Some(b.size_inf);
        }
    }
    Ok(ConstantReport {
        params: *p,
        case: *case,
        c_st: c.c_st,
        c_ch1: c.c_ch1,
        c_ch2: c.c_ch2,
        c_ch3: c.c_ch3,
        c_fl1: c.c_fl1,
        c_fl2: c.c_fl2,
        c_fl3: c.c_fl3,
        c_hl: c.c_hl,
        c_l: c.c_l,
        r1,
        r2,
        r3,
        mode,
        lambda: match mode {
            ThresholdMode::PaperSplit => paper.lambda,
            ThresholdMode::Sharp => sharp.lambda,
        },
        lambda_paper: paper.lambda,
        lambda_sharp: sharp.lambda,
        sharp_bracket_flag: sharp.bracket_flag,
        q,
        q_inf,
        k,
        k_inf,
        audit: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_json_has_one_key_per_constant() {
        let p = NormParams::reference(1.0);
        let case = ModelCase { alpha: 1.0, coupled: false };
        let norms = InitialNorms { y_n: 2.0, ..Default::default() };
        let r = constant_report(&p, &case, ThresholdMode::PaperSplit, Some(&norms)).unwrap();
        let v: serde_json::Value = serde_json::from_str(&r.to_json().unwrap()).unwrap();
        for key in ["c_st", "c_ch1", "c_ch2", "c_ch3", "c_fl1", "c_fl2", "c_fl3", "c_hl", "c_l", "r1", "r3", "lambda_paper", "lambda_sharp", "q", "q_inf"] {
            assert!(v[key].is_number(), "{key}");
        }
        assert!(v["k"].is_null());
        assert_eq!(v["lambda_paper"].as_f64().unwrap(), 389256.0);
        assert!(r.lambda_sharp < r.lambda_paper);
    }

    #[test]
    fn alpha_zero_with_small_eps_is_rejected() {
        let p = NormParams { eps: 0.3, ..NormParams::reference(0.0) };
        let case = ModelCase { alpha: 0.0, coupled: false };
        assert!(constant_report(&p, &case, ThresholdMode::Sharp, None).is_err());
    }
}
