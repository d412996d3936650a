//! The singular kernel f(ρ) = ρ^α (−1/3 < α < 0), its primitive
//! F(ρ) = ρ^{α+1}/(α+1), and three regularized replacements:
//!
//! * `Ler`: F is kept for ρ ≥ ε² and replaced by ρ·Q^ε_n(ρ) below, where
//!   Q^ε_n is the degree-n Taylor polynomial of ρ^α/(α+1) about ρ = ε².
//!   The primitive is C^n across ρ = ε², the kernel C^{n−1}.
//! * `GlobalShift`: f^ε(ρ) = (ρ + ε²)^α everywhere.
//! * `GlobalRational`: f̃^ε(ρ) = 1/(ρ^{−α} + ε) everywhere; its primitive has
//!   no closed form and is integrated numerically.
//!
//! Density inputs are clamped to ρ ≥ 0 before evaluation; negative densities
//! only ever arise as floating-point noise in |ψ|².

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegKind {
    Exact,
    Ler { degree: usize },
    GlobalShift,
    GlobalRational,
}

impl RegKind {
    /// Stable lowercase token, used in CSV rows and CLI flags.
    pub fn token(&self) -> &'static str {
        match self {
            RegKind::Exact => "exact",
            RegKind::Ler { .. } => "ler",
            RegKind::GlobalShift => "shift",
            RegKind::GlobalRational => "rational",
        }
    }
}

/// A choice of kernel: exact or one of the regularizations, with its α and ε.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Regularization {
    kind: RegKind,
    alpha: f64,
    epsilon: f64,
}

const ALPHA_LO: f64 = -1.0 / 3.0;

fn check_alpha(alpha: f64, allow_cubic: bool) -> Result<()> {
    let singular = alpha > ALPHA_LO && alpha < 0.0;
    if singular || (allow_cubic && alpha == 1.0) {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "alpha",
            message: if allow_cubic {
                format!("{alpha} is outside (-1/3, 0), and not the smooth cubic case 1")
            } else {
                format!("{alpha} is outside (-1/3, 0)")
            },
        })
    }
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon.is_finite() && epsilon > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "epsilon",
            message: format!("{epsilon} must be finite and > 0"),
        })
    }
}

impl Regularization {
    pub fn new(kind: RegKind, alpha: f64, epsilon: f64) -> Result<Self> {
        match kind {
            RegKind::Exact => return Self::exact(alpha),
            RegKind::Ler { degree } => {
                if degree < 1 || degree > 64 {
                    return Err(Error::InvalidParameter {
                        name: "n",
                        message: format!("Taylor degree {degree} must be in 1..=64"),
                    });
                }
            }
            RegKind::GlobalShift | RegKind::GlobalRational => {}
        }
        check_alpha(alpha, false)?;
        check_epsilon(epsilon)?;
        Ok(Regularization { kind, alpha, epsilon })
    }

    /// The unregularized kernel. α = 1 is admitted for the smooth cubic
    /// comparison runs; singular exponents must lie in (−1/3, 0).
    pub fn exact(alpha: f64) -> Result<Self> {
        check_alpha(alpha, true)?;
        Ok(Regularization { kind: RegKind::Exact, alpha, epsilon: 0.0 })
    }

    pub fn ler(alpha: f64, epsilon: f64, degree: usize) -> Result<Self> {
        Self::new(RegKind::Ler { degree }, alpha, epsilon)
    }

    pub fn global_shift(alpha: f64, epsilon: f64) -> Result<Self> {
        Self::new(RegKind::GlobalShift, alpha, epsilon)
    }

    pub fn global_rational(alpha: f64, epsilon: f64) -> Result<Self> {
        Self::new(RegKind::GlobalRational, alpha, epsilon)
    }

    pub fn kind(&self) -> RegKind {
        self.kind
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Kernel value f^ε(ρ). Errors only for `Exact` at zero density with α < 0.
    pub fn f(&self, rho: f64) -> Result<f64> {
        let rho = rho.max(0.0);
        match self.kind {
            RegKind::Exact => f_exact(rho, self.alpha),
            RegKind::Ler { degree } => Ok(if rho >= self.epsilon * self.epsilon {
                rho.powf(self.alpha)
            } else {
                ler_q(rho, self.epsilon, self.alpha, degree)
            }),
            RegKind::GlobalShift => Ok((rho + self.epsilon * self.epsilon).powf(self.alpha)),
            RegKind::GlobalRational => Ok(1.0 / (rho.powf(-self.alpha) + self.epsilon)),
        }
    }

    /// Primitive F^ε(ρ) = ∫₀^ρ f^ε, normalized so F^ε(0) = 0.
    pub fn big_f(&self, rho: f64) -> Result<f64> {
        let rho = rho.max(0.0);
        let (alpha, eps) = (self.alpha, self.epsilon);
        match self.kind {
            RegKind::Exact => Ok(big_f_exact(rho, alpha)),
            RegKind::Ler { degree } => Ok(if rho >= eps * eps {
                big_f_exact(rho, alpha)
            } else {
                rho * ler_big_q(rho, eps, alpha, degree)
            }),
            RegKind::GlobalShift => {
                let e2 = eps * eps;
                Ok(((rho + e2).powf(alpha + 1.0) - e2.powf(alpha + 1.0)) / (alpha + 1.0))
            }
            RegKind::GlobalRational => {
                Ok(tanh_sinh(|s| 1.0 / (s.powf(-alpha) + eps), 0.0, rho, 1e-13))
            }
        }
    }
}

/// f(ρ) = ρ^α. Zero density is a hard error for singular α.
pub fn f_exact(rho: f64, alpha: f64) -> Result<f64> {
    let rho = rho.max(0.0);
    if rho == 0.0 && alpha < 0.0 {
        return Err(Error::SingularDensity);
    }
    Ok(rho.powf(alpha))
}

/// F(ρ) = ρ^{α+1}/(α+1), the primitive of ρ^α with F(0) = 0.
pub fn big_f_exact(rho: f64, alpha: f64) -> f64 {
    let rho = rho.max(0.0);
    if rho == 0.0 {
        return 0.0;
    }
    rho.powf(alpha + 1.0) / (alpha + 1.0)
}

/// Taylor coefficients c_k = Π_{j=1..k} (−α + j − 1)/j, c_0 = 1.
/// All factors lie in (0, 1) for α ∈ (−1, 0), so the magnitudes decrease.
fn ler_coeffs(alpha: f64, degree: usize) -> Vec<f64> {
    let mut c = Vec::with_capacity(degree + 1);
    c.push(1.0);
    let mut run = 1.0;
    for j in 1..=degree {
        run *= (-alpha + j as f64 - 1.0) / j as f64;
        c.push(run);
    }
    c
}

/// Q^ε_n(ρ): degree-n Taylor polynomial of ρ^α/(α+1) about ρ = ε², written in
/// powers of u = 1 − ρ/ε². The polynomial branch of the primitive is ρ·Q^ε_n(ρ).
pub fn ler_big_q(rho: f64, epsilon: f64, alpha: f64, degree: usize) -> f64 {
    let rho = rho.max(0.0);
    let u = 1.0 - rho / (epsilon * epsilon);
    let c = ler_coeffs(alpha, degree);
    let mut sum = 1.0;
    let mut upow = 1.0;
    for ck in &c[1..] {
        upow *= u;
        sum += ck * upow;
    }
    epsilon.powf(2.0 * alpha) / (alpha + 1.0) * sum
}

/// q^ε_n(ρ) = d/dρ [ρ·Q^ε_n(ρ)]: the kernel on the polynomial branch.
pub fn ler_q(rho: f64, epsilon: f64, alpha: f64, degree: usize) -> f64 {
    let rho = rho.max(0.0);
    let e2 = epsilon * epsilon;
    let u = 1.0 - rho / e2;
    let c = ler_coeffs(alpha, degree);
    let mut sum = 1.0;
    let mut upow = 1.0; // u^{k-1}
    for (k, ck) in c.iter().enumerate().skip(1) {
        sum += ck * upow * (1.0 - (k + 1) as f64 * rho / e2);
        upow *= u;
    }
    epsilon.powf(2.0 * alpha) / (alpha + 1.0) * sum
}

/// Tanh-sinh quadrature of ∫_a^b f, to absolute tolerance `tol`. Node gaps to
/// the endpoints are formed without cancellation, so integrands with endpoint
/// derivative blow-up (like s^{−α}) still converge at the double-exponential rate.
fn tanh_sinh(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let d = 0.5 * (b - a);
    let half_pi = std::f64::consts::FRAC_PI_2;
    const T_MAX: f64 = 4.0;
    const MAX_LEVEL: u32 = 12;

    // contribution of the node pair at ±t, already weighted
    let pair = |t: f64| -> f64 {
        let y = half_pi * t.sinh();
        let em = (-2.0 * y).exp();
        let gap = d * 2.0 * em / (1.0 + em); // d·(1 − tanh y)
        let w = half_pi * t.cosh() * 4.0 * em / ((1.0 + em) * (1.0 + em));
        if w == 0.0 || gap == 0.0 {
            return 0.0;
        }
        w * (f(a + gap) + f(b - gap))
    };

    let mut h = 1.0;
    let mut sum = half_pi * f(a + d); // t = 0 node, weight (π/2)·cosh(0)·sech²(0)
    let mut k = 1;
    while (k as f64) * h <= T_MAX {
        sum += pair(k as f64 * h);
        k += 1;
    }
    let mut result = d * h * sum;

    for _ in 0..MAX_LEVEL {
        h *= 0.5;
        let mut odd = 0.0;
        let mut k = 1;
        while (k as f64) * h <= T_MAX {
            odd += pair(k as f64 * h);
            k += 2;
        }
        sum += odd;
        let refined = d * h * sum;
        let done = (refined - result).abs() <= tol;
        result = refined;
        if done {
            break;
        }
    }
    result
}
