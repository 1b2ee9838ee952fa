use std::f64::consts::PI;

use serde::Serialize;

use super::amplitude::{threshold_function, ThresholdFunction};
use super::constants::{bound_constants, BoundConstants, PUBLISHED_BOUNDS};
use super::params::{ModelCase, NormParams};
use super::rates::rate_factor;
use super::special::beta_function;
use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditEntry {
    pub inequality: String,
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditReport {
    pub entries: Vec<AuditEntry>,
}

impl AuditReport {
    pub fn failures(&self) -> usize {
        self.entries.iter().filter(|e| !e.pass).count()
    }

    pub fn all_pass(&self) -> bool {
        self.failures() == 0
    }

    fn lt(&mut self, inequality: &str, lhs: f64, rhs: f64) {
        self.entries.push(AuditEntry { inequality: inequality.to_string(), lhs, rhs, pass: lhs < rhs });
    }

    fn le(&mut self, inequality: &str, lhs: f64, rhs: f64) {
        self.entries.push(AuditEntry { inequality: inequality.to_string(), lhs, rhs, pass: lhs <= rhs });
    }

    /// Equality up to a relative `1e-12`, recorded as `lhs <= rhs`.
    fn same(&mut self, inequality: &str, lhs: f64, rhs: f64) {
        let pass = (lhs - rhs).abs() <= 1e-12 * rhs.abs();
        self.entries.push(AuditEntry { inequality: inequality.to_string(), lhs, rhs, pass });
    }
}

/// Re-evaluates every numeric inequality of the published chain at
/// `a = 1/(2000π)`, `Ξ = θ₁ = θ₂ = 1`.
pub fn verify_paper_chain() -> Result<AuditReport> {
    let mut r = AuditReport { entries: Vec::new() };
    let pos = NormParams::reference(1.0);
    let zero = NormParams::reference(0.0);
    let c = bound_constants(&pos)?;
    let ratio: f64 = 1000.0 / 499.0;
    let s43 = (4.0f64 / 3.0).sqrt();
    let sqrt_pi = PI.sqrt();

    // α > 0, uncoupled.
    let ch1_closed = 2f64.powf(5.0 / 3.0) * PI.powf(0.25) * 3f64.powf(-0.5) * ratio.powf(0.75);
    r.same("C_ch1 = 2^(5/3) pi^(1/4) 3^(-1/2) (1000/499)^(3/4)", c.c_ch1, ch1_closed);
    r.lt("C_ch1 < 16/5 pi^(1/4)", c.c_ch1, 16.0 / 5.0 * PI.powf(0.25));
    r.lt("2^(5/3) < 16/5", 2f64.powf(5.0 / 3.0), 3.2);
    r.lt("3^(-1/2) (1000/499)^(3/4) < 1", 3f64.powf(-0.5) * ratio.powf(0.75), 1.0);
    r.lt("2^(3/4) (1000/499)^(1/2) < 12/5", 2f64.powf(0.75) * ratio.sqrt(), 2.4);
    r.lt("(1/(4 pi - 1))^(1/2) < 3/10", (1.0 / (4.0 * PI - 1.0)).sqrt(), 0.3);
    let ch2_mid = 2f64.powf(0.75) * (s43 + 1.0 + 0.5f64.sqrt()) * ratio.sqrt() * (PI / (4.0 * PI - 1.0)).sqrt();
    r.le("C_ch2 <= 2^(3/4) (sqrt(4/3) + 1 + sqrt(1/2)) (1000/499)^(1/2) (pi/(4 pi - 1))^(1/2)", c.c_ch2, ch2_mid * (1.0 + 1e-12));
    let ch2_coarse = 12.0 / 5.0 * 3.0 * (PI / (4.0 * PI - 1.0)).sqrt();
    r.lt("2^(3/4) (sqrt(4/3) + 1 + sqrt(1/2)) (1000/499)^(1/2) (pi/(4 pi - 1))^(1/2) < 36/5 (pi/(4 pi - 1))^(1/2)", ch2_mid, ch2_coarse);
    r.lt("36/5 (pi/(4 pi - 1))^(1/2) < 54/25 pi^(1/2)", ch2_coarse, 54.0 / 25.0 * sqrt_pi);
    r.lt("C_ch2 < 54/25 pi^(1/2)", c.c_ch2, 54.0 / 25.0 * sqrt_pi);

    let b_pos = beta_function(0.25, 0.4)?;
    r.le("B(1/4, 2/5) <= 2^(47/20) + 5 2^(-13/20)", b_pos, 2f64.powf(47.0 / 20.0) + 5.0 * 2f64.powf(-13.0 / 20.0));
    r.lt("2^(73/20) + 5 2^(13/20) < 26", 2f64.powf(73.0 / 20.0) + 5.0 * 2f64.powf(13.0 / 20.0), 26.0);
    let r1_coarse = 3f64.powf(0.25) * 26f64.sqrt();
    let r1 = rate_factor(&pos, &ModelCase { alpha: 1.0, coupled: false })?.value;
    r.lt("r_1 alpha^(1/4) < 3^(1/4) sqrt(26)", r1, r1_coarse);

    let s3 = 1.01f64.powi(3);
    let x1 = (10.0 * s3 * 2.0 * r1_coarse * 16.0 / 5.0 * PI.powf(0.25)).powi(2);
    let x1_closed = 121.0 * 4.0 * 256.0 * PI;
    r.lt("x_1 alpha^(1/2) < 11^2 4 16^2 pi", x1, x1_closed);
    r.lt("1.01^6 26/25 3^(1/2) < 1.1^2 pi^(1/2)", 1.01f64.powi(6) * 26.0 / 25.0 * 3f64.sqrt(), 1.21 * sqrt_pi);
    r.lt("11^2 4 16^2 pi < 389256", x1_closed, 389256.0);

    let x2 = (10.0 / 9.0 * s3 * 2.0 * r1_coarse * 54.0 / 25.0 * sqrt_pi).powi(3);
    let x2_closed = (11.0f64 / 9.0).powi(3) * 8.0 * 54f64.powi(3) / 125.0 * 13.0;
    r.lt("x_2 alpha^(3/4) < (11/9)^3 8 54^3/5^3 13", x2, x2_closed);
    r.lt("3^(3/4) pi^(3/2) < 13", 3f64.powf(0.75) * PI.powf(1.5), 13.0);
    r.lt("1.01^9 sqrt(26)^3/5^3 < 1.1^3", 1.01f64.powi(9) * 26f64.sqrt().powi(3) / 125.0, 1.331);
    r.lt("(11/9)^3 8 54^3/5^3 13 < 239197", x2_closed, 239197.0);

    // α = 0, uncoupled.
    let cz = bound_constants(&zero)?;
    let ch3_closed = 2f64.powf(0.25) * (s43 + 2.0) * ratio.sqrt() * (2.0 * PI / (4.0 * PI - 1.0)).sqrt();
    r.same("C_ch3 = 2^(1/4) (sqrt(4/3) + 2) (1000/499)^(1/2) (2 pi/(4 pi - 1))^(1/2)", cz.c_ch3, ch3_closed);
    let ch3_coarse = (1.25 + 2.0) * 0.3 * 2.4 * sqrt_pi;
    r.lt("C_ch3 < (5/4 + 2) 3/10 12/5 pi^(1/2)", cz.c_ch3, ch3_coarse);
    r.lt("sqrt(4/3) < 5/4", s43, 1.25);
    r.lt("(5/4 + 2) 3/10 12/5 pi^(1/2) < 12/5 pi^(1/2)", ch3_coarse, 2.4 * sqrt_pi);

    let b_zero = beta_function(1.0 / 12.0, 0.2)?;
    r.le("B(1/12, 1/5) <= 2^(43/60) 17", b_zero, 2f64.powf(43.0 / 60.0) * 17.0);
    let r2_coarse = 3f64.powf(5.0 / 12.0) * 2f64.powf(77.0 / 120.0) * 17f64.sqrt();
    let r2 = rate_factor(&zero, &ModelCase { alpha: 0.0, coupled: false })?.value;
    r.lt("r_2 < 3^(5/12) 2^(77/120) sqrt(17)", r2, r2_coarse);

    let q = 2f64.powf(1.25);
    let x3 = (10.0 * s3 * q * r2_coarse * 16.0 / 5.0 * PI.powf(0.25)).powi(2);
    let x3_closed = 100.0 * 1.1 * 8.0 * 17.0 * 256.0 / 25.0 * 9.0;
    r.lt("x_3 < 10^2 1.1 2^3 17 16^2/5^2 9", x3, x3_closed);
    r.lt("1.01^6 < 1.1", 1.01f64.powi(6), 1.1);
    r.lt("3^(5/6) pi^(1/2) < 9/2", 3f64.powf(5.0 / 6.0) * sqrt_pi, 4.5);
    r.lt("10^2 1.1 2^3 17 16^2/5^2 9 < 1378714", x3_closed, 1378714.0);

    let x4 = (10.0 / 9.0 * s3 * q * r2_coarse * 12.0 / 5.0 * sqrt_pi).powi(3);
    let x4_mid = (10.0f64 / 9.0).powi(3) * 1.1 * 64.0 * 17.0 * 17f64.sqrt() * 12f64.powi(3) / 125.0;
    let p54 = 3f64.powf(1.25) * PI.powf(1.5);
    r.lt("x_4 < (10/9)^3 1.1 2^6 17 sqrt(17) 12^3/5^3 3^(5/4) pi^(3/2)", x4, x4_mid * p54);
    r.lt("1.01^9 < 1.1", 1.01f64.powi(9), 1.1);
    r.lt("3^(5/4) pi^(3/2) < 22", p54, 22.0);
    r.lt("(10/9)^3 1.1 2^6 17 sqrt(17) 12^3/5^3 22 < 2058614", x4_mid * 22.0, 2058614.0);

    // Published constant table.
    let published = PUBLISHED_BOUNDS.as_constants();
    for ((name, v), (_, bound)) in c.entries().into_iter().zip(published.entries()) {
        r.lt(&format!("{} < {bound}", label(name)), v, bound);
    }
    let r3 = rate_factor(&pos, &ModelCase { alpha: 1.0, coupled: true })?.value;
    r.lt("r_3 < 4.977 max{1, alpha^(-1/4)}", r3, PUBLISHED_BOUNDS.r3);
    r.lt("r_2 < 7.841", r2, PUBLISHED_BOUNDS.r2);

    // Coupled closing inequalities with the table values.
    let table = |alpha: f64, rate: f64| -> ThresholdFunction {
        threshold_function(&published, rate, &ModelCase { alpha, coupled: true })
    };
    let g3 = table(1.0, PUBLISHED_BOUNDS.r3);
    let x = root(&g3);
    r.lt("root of the alpha > 0 coupled equation < 1.013e6", x, 1.013e6);
    r.le("coupled alpha > 0 inequality at A = 1.013e6", g3.eval(1.013e6), 1.0);
    let g4 = table(0.0, PUBLISHED_BOUNDS.r2);
    let x = root(&g4);
    r.lt("root of the alpha = 0 coupled equation < 4.673e6", x, 4.673e6);
    r.le("coupled alpha = 0 inequality at A = 4.673e6", g4.eval(4.673e6), 1.0);

    // Exact constants make the closing inequalities hold at the published
    // thresholds too.
    r.le("exact g_coupled(alpha = 1) at 1.013e6 <= 1", threshold_function(&c, r3, &ModelCase { alpha: 1.0, coupled: true }).eval(1.013e6), 1.0);
    let exact_zero: BoundConstants = cz;
    r.le(
        "exact g_coupled(alpha = 0) at 4.673e6 <= 1",
        threshold_function(&exact_zero, r2, &ModelCase { alpha: 0.0, coupled: true }).eval(4.673e6),
        1.0,
    );
    Ok(r)
}

fn label(name: &str) -> String {
    let rest = name.trim_start_matches("c_");
    format!("C_{rest}")
}

/// Plain bisection for the audit; independent of the threshold solver.
fn root(g: &ThresholdFunction) -> f64 {
    let (mut lo, mut hi) = (1.0f64, 1e12f64);
    for _ in 0..200 {
        let mid = (lo * hi).sqrt();
        if g.eval(mid) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_passes() {
        let report = verify_paper_chain().unwrap();
        for e in &report.entries {
            assert!(e.pass, "{}: {} vs {}", e.inequality, e.lhs, e.rhs);
        }
        assert!(report.entries.len() >= 45);
    }

    #[test]
    fn spot_values() {
        let report = verify_paper_chain().unwrap();
        let find = |s: &str| report.entries.iter().find(|e| e.inequality == s).unwrap().clone();
        let e = find("2^(5/3) < 16/5");
        assert!((e.lhs - 3.1748).abs() < 1e-4);
        let e = find("C_ch1 < 4.111");
        assert!(e.lhs > 4.110 && e.lhs < 4.111);
        let e = find("11^2 4 16^2 pi < 389256");
        assert!((e.lhs - 389255.896).abs() < 1e-3);
    }
}
