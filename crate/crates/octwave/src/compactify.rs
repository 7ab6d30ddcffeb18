//! Base geometry of the compactified (t,r) half-plane: coordinate charts
//! near null infinity, boundary-defining functions and their derivatives,
//! and the chart forms of the flat d'Alembertian.
//!
//! Two chart families cover a neighborhood of each component of null
//! infinity. With `v = |t| - r`:
//!
//! * `NfTf` (offset `T > 0`, half-space `σt > 0`, valid where `v + T > 0`):
//!   `ϱ_nf = √((v+T)/(|t|+r+T))`, `ϱ_Tf = 1/(v+T)`;
//! * `NfSf` (offset `R > 0`, half-space `σt ≥ 0`, valid where `v < R`):
//!   `ϱ_nf = √((R-v)/(|t|+r+R))`, `ϱ_Sf = 1/(R-v)`.
//!
//! `ϱ_nf` cuts out null infinity, `ϱ_Tf` the timelike cap, `ϱ_Sf` the
//! spacelike cap. All charts require `r > 0`.

use crate::error::{OctError, Result};
use crate::scalar::{lit, Scalar};
use serde::{Deserialize, Serialize};

/// Half-space sign: which of `cl{±t > 0}` a chart lives over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    #[inline]
    pub fn value<S: Scalar>(self) -> S {
        match self {
            Sign::Plus => S::one(),
            Sign::Minus => -S::one(),
        }
    }

    #[inline]
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    #[inline]
    pub fn of<S: Scalar>(x: S) -> Option<Sign> {
        if x > S::zero() {
            Some(Sign::Plus)
        } else if x < S::zero() {
            Some(Sign::Minus)
        } else {
            None
        }
    }
}

impl std::fmt::Display for Sign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Sign::Plus => write!(f, "+"),
            Sign::Minus => write!(f, "-"),
        }
    }
}

/// Which coordinate chart a base point is expressed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ChartKind {
    /// Plain `(t, r)` coordinates on the interior, `r > 0`.
    Cartesian,
    /// `(ϱ_nf, ϱ_Tf)` near null infinity and the timelike cap.
    NfTf,
    /// `(ϱ_nf, ϱ_Sf)` near null infinity and the spacelike cap.
    NfSf,
}

/// A chart together with its half-space sign and shift parameter.
///
/// `offset` is the `T` (NfTf) or `R` (NfSf) shift; it is unused for
/// Cartesian charts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChartId<S> {
    pub kind: ChartKind,
    pub sigma: Sign,
    pub offset: S,
}

impl<S: Scalar> ChartId<S> {
    pub fn cartesian() -> Self {
        ChartId { kind: ChartKind::Cartesian, sigma: Sign::Plus, offset: S::zero() }
    }

    pub fn nftf(sigma: Sign, t_shift: S) -> Self {
        ChartId { kind: ChartKind::NfTf, sigma, offset: t_shift }
    }

    pub fn nfsf(sigma: Sign, r_shift: S) -> Self {
        ChartId { kind: ChartKind::NfSf, sigma, offset: r_shift }
    }

    pub fn validate(&self) -> Result<()> {
        match self.kind {
            ChartKind::Cartesian => Ok(()),
            _ if self.offset >= S::zero() => Ok(()),
            _ => Err(OctError::InvalidArgument(format!(
                "chart offset must be nonnegative, got {:?}",
                self.offset
            ))),
        }
    }
}

/// A chart-tagged point of the base space.
///
/// `(c1, c2)` is `(t, r)` for Cartesian, `(ϱ_nf, ϱ_Tf)` for NfTf, and
/// `(ϱ_nf, ϱ_Sf)` for NfSf.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BasePoint<S> {
    pub chart: ChartId<S>,
    pub c1: S,
    pub c2: S,
}

/// Default guard band around the excluded set of each chart.
pub const DEFAULT_GUARD: f64 = 1e-10;

impl<S: Scalar> BasePoint<S> {
    pub fn cartesian(t: S, r: S) -> Result<Self> {
        if r <= S::zero() {
            return Err(OctError::OutOfRegion(format!("r > 0 required, got r = {:?}", r)));
        }
        Ok(BasePoint { chart: ChartId::cartesian(), c1: t, c2: r })
    }

    /// Both boundary-defining functions of the chart, `(ϱ_nf, ϱ_Tf/ϱ_Sf)`.
    /// Cartesian points are interior; for uniformity they report `(1, 1)`.
    pub fn bdfs(&self) -> (S, S) {
        match self.chart.kind {
            ChartKind::Cartesian => (S::one(), S::one()),
            _ => (self.c1, self.c2),
        }
    }

    /// True if some boundary-defining function vanishes to within `tol`.
    pub fn on_boundary(&self, tol: S) -> bool {
        let (a, b) = self.bdfs();
        a <= tol || b <= tol
    }

    pub fn validate(&self) -> Result<()> {
        self.chart.validate()?;
        match self.chart.kind {
            ChartKind::Cartesian => {
                if self.c2 <= S::zero() {
                    return Err(OctError::OutOfRegion("r > 0 required".into()));
                }
            }
            ChartKind::NfTf => {
                if self.c1 < S::zero() || self.c1 >= S::one() {
                    return Err(OctError::OutOfRegion(format!(
                        "0 <= rho_nf < 1 required, got {:?}",
                        self.c1
                    )));
                }
                if self.c2 < S::zero() {
                    return Err(OctError::OutOfRegion("rho_Tf >= 0 required".into()));
                }
            }
            ChartKind::NfSf => {
                // rho_nf = 1 is the t = 0 slice, legal in this chart.
                if self.c1 < S::zero() || self.c1 > S::one() {
                    return Err(OctError::OutOfRegion(format!(
                        "0 <= rho_nf <= 1 required, got {:?}",
                        self.c1
                    )));
                }
                if self.c2 < S::zero() {
                    return Err(OctError::OutOfRegion("rho_Sf >= 0 required".into()));
                }
            }
        }
        Ok(())
    }
}

/// Maps an interior point `(t, r)` into `target` chart coordinates,
/// rejecting points within `guard` of the chart's excluded set.
pub fn to_chart_with_guard<S: Scalar>(
    t: S,
    r: S,
    target: ChartId<S>,
    guard: S,
) -> Result<BasePoint<S>> {
    target.validate()?;
    if r <= guard {
        return Err(OctError::OutOfRegion(format!("r > 0 required, got r = {:?}", r)));
    }
    let sigma: S = target.sigma.value();
    let at = t.abs();
    match target.kind {
        ChartKind::Cartesian => BasePoint::cartesian(t, r),
        ChartKind::NfTf => {
            if t * sigma <= guard {
                return Err(OctError::OutOfRegion(format!(
                    "sigma*t > 0 required ({}t > 0), got t = {:?}",
                    target.sigma, t
                )));
            }
            let v_plus_t = at - r + target.offset;
            if v_plus_t <= guard {
                return Err(OctError::OutOfRegion(format!(
                    "|t| + T > r required, got |t| - r + T = {:?}",
                    v_plus_t
                )));
            }
            let denom = at + r + target.offset;
            let rho_nf = (v_plus_t / denom).sqrt();
            let rho_tf = v_plus_t.recip();
            Ok(BasePoint { chart: target, c1: rho_nf, c2: rho_tf })
        }
        ChartKind::NfSf => {
            if t * sigma < -guard {
                return Err(OctError::OutOfRegion(format!(
                    "sigma*t >= 0 required ({}t >= 0), got t = {:?}",
                    target.sigma, t
                )));
            }
            let rmv = r - at + target.offset;
            if rmv <= guard {
                return Err(OctError::OutOfRegion(format!(
                    "|t| < r + R required, got r - |t| + R = {:?}",
                    rmv
                )));
            }
            let denom = r + at + target.offset;
            let rho_nf = (rmv / denom).sqrt();
            let rho_sf = rmv.recip();
            Ok(BasePoint { chart: target, c1: rho_nf, c2: rho_sf })
        }
    }
}

/// [`to_chart_with_guard`] with the default guard band.
pub fn to_chart<S: Scalar>(t: S, r: S, target: ChartId<S>) -> Result<BasePoint<S>> {
    to_chart_with_guard(t, r, target, lit(DEFAULT_GUARD))
}

/// Recovers the interior `(t, r)` from chart coordinates. Requires a
/// strictly interior point (both boundary-defining functions positive).
pub fn from_chart<S: Scalar>(p: &BasePoint<S>) -> Result<(S, S)> {
    p.validate()?;
    let sigma: S = p.chart.sigma.value();
    let two = lit::<S>(2.0);
    match p.chart.kind {
        ChartKind::Cartesian => Ok((p.c1, p.c2)),
        ChartKind::NfTf => {
            if p.c1 <= S::zero() || p.c2 <= S::zero() {
                return Err(OctError::NoInteriorPreimage(
                    "boundary point (some bdf = 0) has no interior preimage".into(),
                ));
            }
            let nn = p.c1 * p.c1;
            let w = (two * nn * p.c2).recip();
            let t = sigma * (w * (S::one() + nn) - p.chart.offset);
            let r = w * (S::one() - nn);
            Ok((t, r))
        }
        ChartKind::NfSf => {
            if p.c1 <= S::zero() || p.c2 <= S::zero() {
                return Err(OctError::NoInteriorPreimage(
                    "boundary point (some bdf = 0) has no interior preimage".into(),
                ));
            }
            let nn = p.c1 * p.c1;
            let w = (two * nn * p.c2).recip();
            let r = w * (S::one() + nn) - p.chart.offset;
            let t = sigma * w * (S::one() - nn);
            Ok((t, r))
        }
    }
}

/// Globally defined boundary-defining function of the future (`Sign::Plus`)
/// or past (`Sign::Minus`) null face:
/// `ϱ_± = ((t/√(1+t²+r²) ∓ 1/√2)² + 1/(1+t²+r²))^{1/4}`.
pub fn global_null_bdf<S: Scalar>(t: S, r: S, sign: Sign) -> S {
    let q = S::one() + t * t + r * r;
    let shift = lit::<S>(std::f64::consts::FRAC_1_SQRT_2) * sign.value();
    let a = t / q.sqrt() - shift;
    (a * a + q.recip()).sqrt().sqrt()
}

/// `∂(c1,c2)/∂(t,r)` of the chart map at an interior point, row-major:
/// `[[∂c1/∂t, ∂c1/∂r], [∂c2/∂t, ∂c2/∂r]]`.
pub fn chart_jacobian<S: Scalar>(p: &BasePoint<S>) -> Result<[[S; 2]; 2]> {
    p.validate()?;
    let sigma: S = p.chart.sigma.value();
    let half = lit::<S>(0.5);
    let n = p.c1;
    let w = p.c2;
    match p.chart.kind {
        ChartKind::Cartesian => Ok([[S::one(), S::zero()], [S::zero(), S::one()]]),
        ChartKind::NfTf => {
            if n <= S::zero() || w <= S::zero() {
                return Err(OctError::NoInteriorPreimage("interior point required".into()));
            }
            let dn_dt = sigma * half * (S::one() - n * n) * n * w;
            let dn_dr = -half * (S::one() + n * n) * n * w;
            let dw_dt = -sigma * w * w;
            let dw_dr = w * w;
            Ok([[dn_dt, dn_dr], [dw_dt, dw_dr]])
        }
        ChartKind::NfSf => {
            if n <= S::zero() || w <= S::zero() {
                return Err(OctError::NoInteriorPreimage("interior point required".into()));
            }
            let dn_dt = -sigma * half * (S::one() + n * n) * n * w;
            let dn_dr = half * (S::one() - n * n) * n * w;
            let dw_dt = sigma * w * w;
            let dw_dr = -w * w;
            Ok([[dn_dt, dn_dr], [dw_dt, dw_dr]])
        }
    }
}

/// How to obtain derivatives of a chart function for [`dalembertian_in_chart`].
pub enum DerivativeMode<'a, S> {
    /// Caller supplies the needed partial derivatives analytically.
    Analytic(&'a dyn ChartFunction<S>),
    /// The operator differentiates a plain point function with 4th-order
    /// central differences of the given step.
    FiniteDifference { f: &'a dyn Fn(S, S) -> S, step: S },
}

/// A twice-differentiable scalar function of the two chart coordinates.
pub trait ChartFunction<S> {
    fn value(&self, c1: S, c2: S) -> S;
    fn d1(&self, c1: S, c2: S) -> S;
    fn d2(&self, c1: S, c2: S) -> S;
    fn d11(&self, c1: S, c2: S) -> S;
    fn d12(&self, c1: S, c2: S) -> S;
    fn d22(&self, c1: S, c2: S) -> S;
}

fn stencil_weights<S: Scalar>(h: S) -> ([S; 5], [S; 5]) {
    let d1 = [
        lit::<S>(1.0) / (lit::<S>(12.0) * h),
        lit::<S>(-8.0) / (lit::<S>(12.0) * h),
        S::zero(),
        lit::<S>(8.0) / (lit::<S>(12.0) * h),
        lit::<S>(-1.0) / (lit::<S>(12.0) * h),
    ];
    let h2 = h * h;
    let d2 = [
        lit::<S>(-1.0) / (lit::<S>(12.0) * h2),
        lit::<S>(16.0) / (lit::<S>(12.0) * h2),
        lit::<S>(-30.0) / (lit::<S>(12.0) * h2),
        lit::<S>(16.0) / (lit::<S>(12.0) * h2),
        lit::<S>(-1.0) / (lit::<S>(12.0) * h2),
    ];
    (d1, d2)
}

struct ChartDerivs<S> {
    d1: S,
    d11: S,
    d12: S,
}

fn derivatives_at<S: Scalar>(mode: &DerivativeMode<'_, S>, c1: S, c2: S) -> ChartDerivs<S> {
    match mode {
        DerivativeMode::Analytic(f) => {
            ChartDerivs { d1: f.d1(c1, c2), d11: f.d11(c1, c2), d12: f.d12(c1, c2) }
        }
        DerivativeMode::FiniteDifference { f, step } => {
            let h = *step;
            let (w1, w2) = stencil_weights::<S>(h);
            let offs = [-lit::<S>(2.0) * h, -h, S::zero(), h, lit::<S>(2.0) * h];
            let mut d1 = S::zero();
            let mut d11 = S::zero();
            let mut d12 = S::zero();
            for i in 0..5 {
                let fi = f(c1 + offs[i], c2);
                d1 = d1 + w1[i] * fi;
                d11 = d11 + w2[i] * fi;
                for j in 0..5 {
                    d12 = d12 + w1[i] * w1[j] * f(c1 + offs[i], c2 + offs[j]);
                }
            }
            ChartDerivs { d1, d11, d12 }
        }
    }
}

/// Evaluates the flat d'Alembertian `□ = ∂t² − ∂r²` (d=1 radial convention)
/// at a point of an NfTf or NfSf chart, acting on a function of the chart
/// coordinates.
///
/// In NfTf coordinates
/// `□ = −ϱ_nf⁴ϱ_Tf² ∂²/∂ϱ_nf² + 2ϱ_nf³ϱ_Tf³ ∂²/∂ϱ_nf∂ϱ_Tf − ϱ_nf³ϱ_Tf² ∂/∂ϱ_nf`,
/// and in NfSf coordinates the same with every sign flipped. The first-order
/// coefficient follows from the recorded chart partials; it is the unique
/// form consistent with `∂t² − ∂r²` under the chart map (see the
/// finite-difference cross-checks in the tests).
pub fn dalembertian_in_chart<S: Scalar>(
    chart: ChartId<S>,
    mode: &DerivativeMode<'_, S>,
    c1: S,
    c2: S,
) -> Result<S> {
    let n = c1;
    let w = c2;
    let n3 = n * n * n;
    let w2 = w * w;
    let two = lit::<S>(2.0);
    let d = derivatives_at(mode, c1, c2);
    match chart.kind {
        ChartKind::Cartesian => Err(OctError::IncompatibleCharts(
            "d'Alembertian chart form is defined on NfTf/NfSf charts only".into(),
        )),
        ChartKind::NfTf => Ok(-n3 * n * w2 * d.d11 + two * n3 * w2 * w * d.d12 - n3 * w2 * d.d1),
        ChartKind::NfSf => Ok(n3 * n * w2 * d.d11 - two * n3 * w2 * w * d.d12 + n3 * w2 * d.d1),
    }
}
