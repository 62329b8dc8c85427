//! Dynamics of the deformed relativistic particle.
//!
//! The Hamiltonian is the mass-shell constraint H = α(det p̃ − m²). Because
//! the bracket structure is deformed, this does not describe a free
//! particle: ẋ = −α(f·p + p·f†) with the exact deformation factor f, while
//! ṗ = 0. Ten quantities are conserved, the four momenta and the traceless
//! part j of J = log(f)/(iλ); only Tr J evolves, at the constant rate
//! −4αm². The trajectory has the closed form
//! x(t) = U·√(t(1−t)) + V·t + x(0) in the rescaled time t ∈ [0,1], with U
//! traceless hermitean, and a finite lifetime |Tr k|/(|λ|m²), k = e^{iλj}p;
//! the velocity dx/dt is singular at both endpoints.

use num::complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::brackets::{f_exact_from_m, BracketError, DeformationContext};
use crate::mat::{
    fourvector_to_matrix, mat2_exp, mat2_log, matrix_to_fourvector, max_abs2, FourVector, Mat2,
    Mat2c, MatError,
};

#[derive(Debug, Error)]
pub enum DynError {
    #[error("initial state off shell: det p̃ deviates from m² by {defect:.3e} (relative)")]
    OffShell { defect: f64 },
    #[error("λ = 0 is the canonical limit: the trajectory is the free-particle line x(τ) = x(0) − 2ατp")]
    CanonicalLimit,
    #[error("Tr k = {0:.3e} is degenerate: the rescaled-time construction divides by |Tr k|")]
    DegenerateLifetime(f64),
    #[error("initial point sits at a trajectory endpoint (cos of the phase vanishes)")]
    StartAtEndpoint,
    #[error("trajectories incompatible: {0}")]
    Mismatch(String),
    #[error("trajectory is empty")]
    Empty,
    #[error(transparent)]
    Bracket(#[from] BracketError),
    #[error(transparent)]
    Mat(#[from] MatError),
}

/// Position and momentum of the particle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PhasePoint {
    pub x: FourVector,
    pub p: FourVector,
}

impl PhasePoint {
    pub fn new(x: FourVector, p: FourVector) -> Self {
        Self { x, p }
    }

    /// Relative deviation of det p̃ from m².
    pub fn shell_defect(&self, ctx: &DeformationContext) -> f64 {
        let m2 = ctx.mass * ctx.mass;
        (self.p.minkowski_sq() - m2).abs() / m2.max(self.p.minkowski_sq().abs())
    }

    pub fn require_on_shell(&self, ctx: &DeformationContext) -> Result<(), DynError> {
        let defect = self.shell_defect(ctx);
        if defect > 1e-10 {
            return Err(DynError::OffShell { defect });
        }
        Ok(())
    }
}

/// H = α(det p̃ − m²); zero on shell.
pub fn hamiltonian(z: &PhasePoint, ctx: &DeformationContext) -> f64 {
    ctx.alpha * (z.p.minkowski_sq() - ctx.mass * ctx.mass)
}

fn xp_tilde(z: &PhasePoint) -> Mat2c {
    fourvector_to_matrix(&z.x).mul(&fourvector_to_matrix(&z.p).tilde())
}

/// Right-hand side of the equations of motion:
/// ẋ matrix = −α(f·p + p·f†), converted to components; ṗ = 0 exactly.
pub fn eom_rhs(z: &PhasePoint, ctx: &DeformationContext) -> Result<(FourVector, FourVector), DynError> {
    let xdot = xdot_matrix(z, ctx)?;
    Ok((matrix_to_fourvector(&xdot)?, FourVector::zero()))
}

fn xdot_matrix(z: &PhasePoint, ctx: &DeformationContext) -> Result<Mat2c, DynError> {
    let f = f_exact_from_m(&xp_tilde(z), ctx.lambda)?;
    let pm = fourvector_to_matrix(&z.p);
    let a = Complex64::new(-ctx.alpha, 0.0);
    Ok(f.mul(&pm).add(&pm.mul(&f.dagger())).scale(&a))
}

/// J = log(f)/(iλ) on the principal branch, falling back to the series
/// J = M + λ²M³/6 + 3λ⁴M⁵/40 near λ = 0 where the quotient would cancel
/// catastrophically; satisfies sin(λJ) = λxp̃.
pub fn compute_j_full(z: &PhasePoint, ctx: &DeformationContext) -> Result<Mat2c, DynError> {
    let m = xp_tilde(z);
    let scale = max_abs2(&m).max(1.0);
    if ctx.lambda.abs() * scale < 1e-5 {
        let m3 = m.mul(&m).mul(&m);
        let m5 = m3.mul(&m).mul(&m);
        let l2 = ctx.lambda * ctx.lambda;
        return Ok(m
            .add(&m3.scale(&Complex64::new(l2 / 6.0, 0.0)))
            .add(&m5.scale(&Complex64::new(l2 * l2 * 3.0 / 40.0, 0.0))));
    }
    let f = f_exact_from_m(&m, ctx.lambda)?;
    let log = mat2_log(&f)?;
    Ok(log.scale(&(Complex64::new(0.0, -1.0) / ctx.lambda)))
}

/// The conserved deformed angular momenta: j = J − ½·1l·Tr J, traceless.
pub fn compute_j(z: &PhasePoint, ctx: &DeformationContext) -> Result<Mat2c, DynError> {
    let j_full = compute_j_full(z, ctx)?;
    Ok(traceless(&j_full))
}

fn traceless(m: &Mat2c) -> Mat2c {
    m.sub(&Mat2::identity().scale(&(m.trace() * 0.5)))
}

/// One sampled state of an evolution.
#[derive(Clone, Debug)]
pub struct Sample {
    pub tau: f64,
    /// rescaled time t ∈ [0,1] along the trajectory segment
    pub t: f64,
    pub x: FourVector,
    pub p: FourVector,
    pub j: Mat2c,
    pub det_p: f64,
}

/// Fixed-step evolution record. `truncated` marks a run stopped by the
/// endpoint guard before reaching the requested span.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub ctx: DeformationContext,
    pub z0: PhasePoint,
    pub samples: Vec<Sample>,
    pub truncated: bool,
}

/// Smallest |eigenvalue| of 1l − λ²(xp̃)² below which integration stops: the
/// velocity in rescaled time is genuinely singular at the endpoints, and
/// stepping past them would cross the square root's branch cut.
pub const ENDPOINT_GUARD: f64 = 1e-8;

/// Classical fixed-step fourth-order integration of ẋ with p frozen.
/// `tau_max` may be negative (the trajectory is integrated backwards).
/// Stops gracefully with the truncation flag when the endpoint guard trips.
pub fn integrate(
    z0: &PhasePoint,
    ctx: &DeformationContext,
    tau_max: f64,
    steps: u32,
) -> Result<Trajectory, DynError> {
    z0.require_on_shell(ctx)?;
    assert!(steps > 0, "integration needs at least one step");
    let h = tau_max / steps as f64;
    let tmap = TimeMap::new(z0, ctx)?;

    let mut samples = Vec::with_capacity(steps as usize + 1);
    let mut truncated = false;
    let mut x = z0.x;
    let det_p = z0.p.minkowski_sq();

    let record = |samples: &mut Vec<Sample>, tau: f64, x: &FourVector| -> Result<(), DynError> {
        let z = PhasePoint::new(*x, z0.p);
        samples.push(Sample {
            tau,
            t: tmap.t_of_x0(x.c[0]),
            x: *x,
            p: z0.p,
            j: compute_j(&z, ctx)?,
            det_p,
        });
        Ok(())
    };
    record(&mut samples, 0.0, &x)?;

    let deriv = |x: &FourVector| -> Result<FourVector, DynError> {
        let z = PhasePoint::new(*x, z0.p);
        Ok(eom_rhs(&z, ctx)?.0)
    };

    'steps: for n in 0..steps {
        // endpoint guard on the current state
        let margin = crate::brackets::sqrt_argument_margin(&x, &z0.p, ctx.lambda);
        if margin < ENDPOINT_GUARD {
            truncated = true;
            break;
        }
        let stage = |xv: &FourVector| -> Result<FourVector, DynError> { deriv(xv) };
        let k1 = match stage(&x) {
            Ok(k) => k,
            Err(DynError::Bracket(_)) | Err(DynError::Mat(_)) => {
                truncated = true;
                break 'steps;
            }
            Err(e) => return Err(e),
        };
        let advance = |x: &FourVector, k: &FourVector, s: f64| {
            FourVector::new(
                x.c[0] + s * h * k.c[0],
                x.c[1] + s * h * k.c[1],
                x.c[2] + s * h * k.c[2],
                x.c[3] + s * h * k.c[3],
            )
        };
        let stages: Result<(FourVector, FourVector, FourVector), DynError> = (|| {
            let k2 = stage(&advance(&x, &k1, 0.5))?;
            let k3 = stage(&advance(&x, &k2, 0.5))?;
            let k4 = stage(&advance(&x, &k3, 1.0))?;
            Ok((k2, k3, k4))
        })();
        let (k2, k3, k4) = match stages {
            Ok(ks) => ks,
            Err(DynError::Bracket(_)) | Err(DynError::Mat(_)) => {
                truncated = true;
                break 'steps;
            }
            Err(e) => return Err(e),
        };
        x = FourVector::new(
            x.c[0] + h / 6.0 * (k1.c[0] + 2.0 * k2.c[0] + 2.0 * k3.c[0] + k4.c[0]),
            x.c[1] + h / 6.0 * (k1.c[1] + 2.0 * k2.c[1] + 2.0 * k3.c[1] + k4.c[1]),
            x.c[2] + h / 6.0 * (k1.c[2] + 2.0 * k2.c[2] + 2.0 * k3.c[2] + k4.c[2]),
            x.c[3] + h / 6.0 * (k1.c[3] + 2.0 * k2.c[3] + 2.0 * k3.c[3] + k4.c[3]),
        );
        match record(&mut samples, (n + 1) as f64 * h, &x) {
            Ok(()) => {}
            Err(DynError::Bracket(_)) | Err(DynError::Mat(_)) => {
                truncated = true;
                break 'steps;
            }
            Err(e) => return Err(e),
        }
    }

    Ok(Trajectory {
        ctx: *ctx,
        z0: *z0,
        samples,
        truncated,
    })
}

/// Integrate both directions of the evolution parameter from τ = 0 over
/// [tau_min, tau_max] ∋ 0, splitting `steps` proportionally so the step size
/// matches in both directions.
pub fn integrate_span(
    z0: &PhasePoint,
    ctx: &DeformationContext,
    tau_min: f64,
    tau_max: f64,
    steps: u32,
) -> Result<Trajectory, DynError> {
    assert!(tau_min <= 0.0 && tau_max >= 0.0 && steps > 0);
    let span = tau_max - tau_min;
    if tau_min == 0.0 {
        return integrate(z0, ctx, tau_max, steps);
    }
    if tau_max == 0.0 {
        return integrate(z0, ctx, tau_min, steps);
    }
    let steps_pos = ((steps as f64 * tau_max / span).round() as u32).clamp(1, steps - 1);
    let steps_neg = steps - steps_pos;
    let fwd = integrate(z0, ctx, tau_max, steps_pos)?;
    let bwd = integrate(z0, ctx, tau_min, steps_neg)?;
    fwd.merge(bwd)
}

impl Trajectory {
    /// Range of the time coordinate covered by the samples.
    pub fn x0_range(&self) -> f64 {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for s in &self.samples {
            lo = lo.min(s.x.c[0]);
            hi = hi.max(s.x.c[0]);
        }
        hi - lo
    }

    /// Merge with another trajectory of the same origin (one integrated
    /// backwards), sorted by τ.
    pub fn merge(mut self, other: Trajectory) -> Result<Trajectory, DynError> {
        if self.ctx != other.ctx || self.z0 != other.z0 {
            return Err(DynError::Mismatch("different origin or context".into()));
        }
        self.truncated |= other.truncated;
        self.samples.extend(other.samples.into_iter().filter(|s| s.tau != 0.0));
        self.samples
            .sort_by(|a, b| a.tau.partial_cmp(&b.tau).unwrap());
        Ok(self)
    }
}

/// Map from the time coordinate to the rescaled time,
/// t = (λm²/|Tr k|)(x₀ + ½Tr C) + ½.
struct TimeMap {
    factor: f64,
    half_tr_c: f64,
}

impl TimeMap {
    fn new(z0: &PhasePoint, ctx: &DeformationContext) -> Result<Self, DynError> {
        let m2 = ctx.mass * ctx.mass;
        if ctx.lambda == 0.0 {
            // t ≡ ½: the canonical line never approaches an endpoint
            return Ok(Self {
                factor: 0.0,
                half_tr_c: 0.0,
            });
        }
        let j = compute_j(z0, ctx)?;
        let k = exp_i_lambda(&j, ctx.lambda).mul(&fourvector_to_matrix(&z0.p));
        let trk = k.trace();
        if trk.norm() < 1e-12 * max_abs2(&k).max(1.0) {
            // degenerate: rescaled time undefined
            return Ok(Self {
                factor: f64::NAN,
                half_tr_c: f64::NAN,
            });
        }
        let beta0 = compute_j_full(z0, ctx)?.trace();
        let theta0 = 0.5 * ctx.lambda * beta0.re;
        let phase = Complex64::new(0.0, theta0).exp();
        let osc = k.scale(&phase).sub(&k.dagger().scale(&phase.conj()));
        let c_mat = fourvector_to_matrix(&z0.x)
            .sub(&osc.scale(&(Complex64::new(0.0, -0.5) / (ctx.lambda * m2))));
        Ok(Self {
            factor: ctx.lambda * m2 / trk.norm(),
            half_tr_c: 0.5 * c_mat.trace().re,
        })
    }

    fn t_of_x0(&self, x0: f64) -> f64 {
        self.factor * (x0 + self.half_tr_c) + 0.5
    }
}

fn exp_i_lambda(m: &Mat2c, lambda: f64) -> Mat2c {
    mat2_exp(&m.scale(&Complex64::new(0.0, lambda)))
}

/// Closed-form solution data: k = e^{iλj}p, φ = arg Tr k, the integration
/// constant C, the shape matrices U (traceless) and V, and the lifetime
/// |Tr k|/(|λ|m²).
#[derive(Clone, Debug)]
pub struct AnalyticSolution {
    pub ctx: DeformationContext,
    pub z0: PhasePoint,
    pub j: Mat2c,
    pub k: Mat2c,
    pub phi: f64,
    pub beta0: f64,
    pub c_mat: Mat2c,
    pub u_mat: Mat2c,
    pub v_mat: Mat2c,
    pub lifetime: f64,
    /// position at the t = 0 endpoint of the segment
    pub x_at_t0: Mat2c,
    /// sign of cos(s) on this trajectory segment
    branch: f64,
    /// s₀ = λβ₀/2 + φ at τ = 0
    s0: f64,
}

/// Construct the closed-form trajectory through z₀. Requires λ ≠ 0 (the
/// canonical limit is the free-particle line), an on-shell state, and a
/// nondegenerate Tr k.
pub fn solve_analytic(
    z0: &PhasePoint,
    ctx: &DeformationContext,
) -> Result<AnalyticSolution, DynError> {
    z0.require_on_shell(ctx)?;
    if ctx.lambda == 0.0 {
        return Err(DynError::CanonicalLimit);
    }
    let m2 = ctx.mass * ctx.mass;
    let j = compute_j(z0, ctx)?;
    let beta0_c = compute_j_full(z0, ctx)?.trace();
    debug_assert!(beta0_c.im.abs() <= 1e-10 * (1.0 + beta0_c.norm()));
    let beta0 = beta0_c.re;
    let k = exp_i_lambda(&j, ctx.lambda).mul(&fourvector_to_matrix(&z0.p));
    let trk = k.trace();
    if trk.norm() < 1e-12 * max_abs2(&k).max(1.0) {
        return Err(DynError::DegenerateLifetime(trk.norm()));
    }
    let phi = trk.arg();
    let s0 = 0.5 * ctx.lambda * beta0 + phi;
    let cos0 = s0.cos();
    if cos0.abs() < 1e-12 {
        return Err(DynError::StartAtEndpoint);
    }
    let branch = cos0.signum();

    // K = k e^{−iφ} split into hermitean parts: K = K_h + iK_a
    let kk = k.scale(&Complex64::new(0.0, -phi).exp());
    let k_h = kk.add(&kk.dagger()).scale(&Complex64::new(0.5, 0.0));
    let k_a = kk.sub(&kk.dagger()).scale(&Complex64::new(0.0, -0.5));
    let u_mat = k_a.scale(&Complex64::new(2.0 * branch / (ctx.lambda * m2), 0.0));
    let v_mat = k_h.scale(&Complex64::new(-2.0 / (ctx.lambda * m2), 0.0));

    let theta0 = 0.5 * ctx.lambda * beta0;
    let osc0 = oscillator(&k, theta0, ctx.lambda, m2);
    let c_mat = fourvector_to_matrix(&z0.x).sub(&osc0);
    // x at the t = 0 endpoint: C + K_h/(λm²)
    let x_at_t0 = c_mat.add(&k_h.scale(&Complex64::new(1.0 / (ctx.lambda * m2), 0.0)));
    let lifetime = trk.norm() / (ctx.lambda.abs() * m2);

    Ok(AnalyticSolution {
        ctx: *ctx,
        z0: *z0,
        j,
        k,
        phi,
        beta0,
        c_mat,
        u_mat,
        v_mat,
        lifetime,
        x_at_t0,
        branch,
        s0,
    })
}

/// (1/(2iλm²))(e^{iθ}k − e^{−iθ}k†)
fn oscillator(k: &Mat2c, theta: f64, lambda: f64, m2: f64) -> Mat2c {
    let phase = Complex64::new(0.0, theta).exp();
    k.scale(&phase)
        .sub(&k.dagger().scale(&phase.conj()))
        .scale(&(Complex64::new(0.0, -0.5) / (lambda * m2)))
}

impl AnalyticSolution {
    pub fn beta(&self, tau: f64) -> f64 {
        self.beta0 - 4.0 * self.ctx.alpha * self.ctx.mass.powi(2) * tau
    }

    fn s_of_tau(&self, tau: f64) -> f64 {
        0.5 * self.ctx.lambda * self.beta(tau) + self.phi
    }

    /// Position matrix at evolution parameter τ.
    pub fn x_matrix_of_tau(&self, tau: f64) -> Mat2c {
        let theta = 0.5 * self.ctx.lambda * self.beta(tau);
        self.c_mat.add(&oscillator(
            &self.k,
            theta,
            self.ctx.lambda,
            self.ctx.mass.powi(2),
        ))
    }

    pub fn x_of_tau(&self, tau: f64) -> FourVector {
        matrix_to_fourvector(&self.x_matrix_of_tau(tau)).expect("closed form stays hermitean")
    }

    /// The time coordinate: x₀(τ) = −|Tr k|/(2λm²)·sin(λβ(τ)/2 + φ) − ½Tr C.
    pub fn x0_of_tau(&self, tau: f64) -> f64 {
        let m2 = self.ctx.mass.powi(2);
        -self.k.trace().norm() / (2.0 * self.ctx.lambda * m2) * self.s_of_tau(tau).sin()
            - 0.5 * self.c_mat.trace().re
    }

    pub fn t_of_tau(&self, tau: f64) -> f64 {
        0.5 - 0.5 * self.s_of_tau(tau).sin()
    }

    /// Inverse of [`Self::t_of_tau`] on this trajectory segment.
    pub fn tau_of_t(&self, t: f64) -> f64 {
        let s_star = if self.branch > 0.0 {
            (1.0 - 2.0 * t).asin()
        } else {
            std::f64::consts::PI - (1.0 - 2.0 * t).asin()
        };
        // shift into the window containing s₀
        let base = if self.branch > 0.0 {
            self.s0.sin().asin()
        } else {
            std::f64::consts::PI - self.s0.sin().asin()
        };
        let offset = self.s0 - base;
        let s = s_star + offset;
        // s(τ) = s₀ − 2αλm²τ
        (self.s0 - s) / (2.0 * self.ctx.alpha * self.ctx.lambda * self.ctx.mass.powi(2))
    }

    /// x(t) = U·√(t(1−t)) + V·t + x(t=0).
    pub fn x_matrix_of_t(&self, t: f64) -> Mat2c {
        let s = (t * (1.0 - t)).max(0.0).sqrt();
        self.u_mat
            .scale(&Complex64::new(s, 0.0))
            .add(&self.v_mat.scale(&Complex64::new(t, 0.0)))
            .add(&self.x_at_t0)
    }

    pub fn x_of_t(&self, t: f64) -> FourVector {
        matrix_to_fourvector(&self.x_matrix_of_t(t)).expect("closed form stays hermitean")
    }

    /// dx/dt = U·(1−2t)/(2√(t(1−t))) + V; singular at t = 0, 1 and equal to
    /// V at t = ½.
    pub fn velocity_of_t(&self, t: f64) -> Option<FourVector> {
        let w = t * (1.0 - t);
        if w <= 0.0 {
            return None;
        }
        let m = self
            .u_mat
            .scale(&Complex64::new((1.0 - 2.0 * t) / (2.0 * w.sqrt()), 0.0))
            .add(&self.v_mat);
        Some(matrix_to_fourvector(&m).expect("shape matrices are hermitean"))
    }
}

/// Deviation metrics between an integrated trajectory and the closed form.
#[derive(Clone, Debug, Serialize)]
pub struct CompareReport {
    /// max per-component |x_traj(τ) − x_closed(τ)|
    pub max_deviation: f64,
    /// residual of the least-squares fit of x(t) − x(0) to U√(t(1−t)) + Vt
    pub fit_residual: f64,
    /// max per-component deviation of the fitted U from the closed-form U
    pub u_fit_error: f64,
    pub v_fit_error: f64,
    /// |dx/dt − V| at t = ½ (quadratic interpolation through the samples)
    pub velocity_half_error: Option<f64>,
    pub samples_compared: usize,
    pub x0_range: f64,
}

/// Compare an integrated trajectory against the closed form from the same
/// initial state and context.
pub fn compare(traj: &Trajectory, sol: &AnalyticSolution) -> Result<CompareReport, DynError> {
    if traj.ctx != sol.ctx {
        return Err(DynError::Mismatch("deformation contexts differ".into()));
    }
    if traj.z0 != sol.z0 {
        return Err(DynError::Mismatch("initial states differ".into()));
    }
    if traj.samples.is_empty() {
        return Err(DynError::Empty);
    }

    let mut max_dev = 0.0f64;
    for s in &traj.samples {
        let xa = sol.x_of_tau(s.tau);
        for i in 0..4 {
            max_dev = max_dev.max((s.x.c[i] - xa.c[i]).abs());
        }
    }

    // least-squares fit of x(t) − x(t=0) to u·√(t(1−t)) + v·t per component
    let x_t0 = matrix_to_fourvector(&sol.x_at_t0)?;
    let mut u_fit = [0.0f64; 4];
    let mut v_fit = [0.0f64; 4];
    let in_fit: Vec<&Sample> = traj
        .samples
        .iter()
        .filter(|s| s.t.is_finite() && s.t > 0.005 && s.t < 0.995)
        .collect();
    if in_fit.len() < 4 {
        return Err(DynError::Mismatch(
            "too few samples inside the rescaled-time interval for a shape fit".into(),
        ));
    }
    let (mut s11, mut s12, mut s22) = (0.0f64, 0.0f64, 0.0f64);
    for s in &in_fit {
        let phi1 = (s.t * (1.0 - s.t)).sqrt();
        s11 += phi1 * phi1;
        s12 += phi1 * s.t;
        s22 += s.t * s.t;
    }
    let det = s11 * s22 - s12 * s12;
    for c in 0..4 {
        let (mut b1, mut b2) = (0.0f64, 0.0f64);
        for s in &in_fit {
            let phi1 = (s.t * (1.0 - s.t)).sqrt();
            let y = s.x.c[c] - x_t0.c[c];
            b1 += phi1 * y;
            b2 += s.t * y;
        }
        u_fit[c] = (s22 * b1 - s12 * b2) / det;
        v_fit[c] = (s11 * b2 - s12 * b1) / det;
    }
    let mut fit_residual = 0.0f64;
    for s in &in_fit {
        let phi1 = (s.t * (1.0 - s.t)).sqrt();
        for c in 0..4 {
            let model = u_fit[c] * phi1 + v_fit[c] * s.t + x_t0.c[c];
            fit_residual = fit_residual.max((s.x.c[c] - model).abs());
        }
    }
    let u_true = matrix_to_fourvector(&sol.u_mat)?;
    let v_true = matrix_to_fourvector(&sol.v_mat)?;
    let mut u_err = 0.0f64;
    let mut v_err = 0.0f64;
    for c in 0..4 {
        u_err = u_err.max((u_fit[c] - u_true.c[c]).abs());
        v_err = v_err.max((v_fit[c] - v_true.c[c]).abs());
    }

    let velocity_half_error = velocity_at_half(traj, sol)?;

    Ok(CompareReport {
        max_deviation: max_dev,
        fit_residual,
        u_fit_error: u_err,
        v_fit_error: v_err,
        velocity_half_error,
        samples_compared: traj.samples.len(),
        x0_range: traj.x0_range(),
    })
}

/// dx/dt at t = ½ from the integrated samples: the exact EOM velocity at
/// each sampled state divided by dt/dτ, interpolated quadratically in t.
fn velocity_at_half(traj: &Trajectory, sol: &AnalyticSolution) -> Result<Option<f64>, DynError> {
    let m2 = sol.ctx.mass.powi(2);
    let trk = sol.k.trace().norm();
    let mut best: Vec<(f64, usize)> = traj
        .samples
        .iter()
        .enumerate()
        .filter(|(_, s)| s.t.is_finite())
        .map(|(i, s)| ((s.t - 0.5).abs(), i))
        .collect();
    best.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    if best.len() < 3 || best[0].0 > 0.05 {
        return Ok(None);
    }
    let idx: Vec<usize> = best[..3].iter().map(|(_, i)| *i).collect();
    // velocity in rescaled time at the three nearest samples
    let mut pts: Vec<(f64, [f64; 4])> = Vec::new();
    for &i in &idx {
        let s = &traj.samples[i];
        let z = PhasePoint::new(s.x, s.p);
        let (xdot, _) = eom_rhs(&z, &sol.ctx)?;
        let dtdtau = sol.ctx.lambda * m2 / trk * xdot.c[0];
        if dtdtau.abs() < 1e-30 {
            return Ok(None);
        }
        pts.push((s.t, std::array::from_fn(|c| xdot.c[c] / dtdtau)));
    }
    // Lagrange interpolation to t = 1/2
    let t = 0.5;
    let mut interp = [0.0f64; 4];
    for a in 0..3 {
        let mut w = 1.0;
        for b in 0..3 {
            if a != b {
                w *= (t - pts[b].0) / (pts[a].0 - pts[b].0);
            }
        }
        for c in 0..4 {
            interp[c] += w * pts[a].1[c];
        }
    }
    let v_true = matrix_to_fourvector(&sol.v_mat)?;
    let mut err = 0.0f64;
    for c in 0..4 {
        err = err.max((interp[c] - v_true.c[c]).abs());
    }
    Ok(Some(err))
}

/// Straightened coordinates X_i = x_i − U_i·√(t(1−t)); the spatial
/// components become affine in t.
#[derive(Clone, Debug)]
pub struct Straightened {
    pub samples: Vec<(f64, FourVector)>,
    /// max affine-fit residual over the spatial components
    pub affine_residual: f64,
    /// max |X(t=½) − (x(t=½) − U/2)| consistency probe
    pub halfway_identity: f64,
}

pub fn straighten(traj: &Trajectory, sol: &AnalyticSolution) -> Result<Straightened, DynError> {
    if traj.ctx != sol.ctx || traj.z0 != sol.z0 {
        return Err(DynError::Mismatch("different origin or context".into()));
    }
    let u = matrix_to_fourvector(&sol.u_mat)?;
    let mut samples = Vec::with_capacity(traj.samples.len());
    for s in &traj.samples {
        if !s.t.is_finite() || s.t < 0.0 || s.t > 1.0 {
            continue;
        }
        let w = (s.t * (1.0 - s.t)).max(0.0).sqrt();
        let xs = FourVector::new(
            s.x.c[0],
            s.x.c[1] - u.c[1] * w,
            s.x.c[2] - u.c[2] * w,
            s.x.c[3] - u.c[3] * w,
        );
        samples.push((s.t, xs));
    }
    if samples.len() < 3 {
        return Err(DynError::Empty);
    }
    // affine fit X_i ≈ a + b t per spatial component
    let n = samples.len() as f64;
    let st: f64 = samples.iter().map(|(t, _)| t).sum();
    let stt: f64 = samples.iter().map(|(t, _)| t * t).sum();
    let det = n * stt - st * st;
    let mut residual = 0.0f64;
    for c in 1..4 {
        let sy: f64 = samples.iter().map(|(_, x)| x.c[c]).sum();
        let sty: f64 = samples.iter().map(|(t, x)| t * x.c[c]).sum();
        let b = (n * sty - st * sy) / det;
        let a = (sy - b * st) / n;
        for (t, x) in &samples {
            residual = residual.max((x.c[c] - a - b * t).abs());
        }
    }
    // at t = ½ the subtraction is exactly U/2
    let mut halfway = 0.0f64;
    if let Some((t, xs)) = samples
        .iter()
        .min_by(|a, b| (a.0 - 0.5).abs().partial_cmp(&(b.0 - 0.5).abs()).unwrap())
    {
        if (t - 0.5).abs() < 1e-6 {
            if let Some(orig) = traj.samples.iter().find(|s| s.t == *t) {
                for c in 1..4 {
                    halfway = halfway.max((xs.c[c] - (orig.x.c[c] - 0.5 * u.c[c])).abs());
                }
            }
        }
    }
    Ok(Straightened {
        samples,
        affine_residual: residual,
        halfway_identity: halfway,
    })
}
