//! Fiber coordinates on the compactified cotangent bundle, the Klein–Gordon
//! symbol in every chart, characteristic-set membership, and transitions
//! between fiber coordinate systems.
//!
//! Four fiber chart families are used. Over a Cartesian base, `(τ, Ξ, η)`
//! are the coefficients of `τ dt + Ξ dr` plus the angular momentum
//! magnitude. Over an NfTf (resp. NfSf) base, `(ξ, ζ, η)` parametrize the
//! covector `ϱ_nf⁻²ϱ_Tf⁻¹ ξ dϱ_nf + ϱ_nf⁻¹ϱ_Tf⁻² ζ dϱ_Tf + ϱ_nf⁻²ϱ_Tf⁻¹ η dθ`
//! (resp. with `ϱ_Sf`). Near fiber infinity two projective charts are used,
//! each in two mirror copies:
//!
//! * `InfTf` over NfTf: `ρ = −1/ζ`, `s = ξ/ζ`, `η̂ = −η/ζ` on `{ζ < 0}`
//!   (mirrored: `ρ = 1/ζ`, `η̂ = η/ζ` on `{ζ > 0}`);
//! * `InfSf` over NfSf: `ρ = 1/(ζ−ξ)`, `λ = (ζ+ξ)/(ζ−ξ)`, `η̂ = η/(ζ−ξ)`
//!   on `{ζ−ξ > 0}` (mirrored on `{ζ−ξ < 0}`).
//!
//! `ρ = 0` is fiber infinity. Angular momentum is stored as a nonnegative
//! magnitude throughout; the Cartesian `η` is the effective (sc-normalized)
//! magnitude making `p = −τ² + Ξ² + η² + m²` exact, and transitions carry it
//! so that the symbol is chart-independent. Raw `dθ`-coefficient conventions
//! differ from this by base-dependent positive factors.

use crate::compactify::{from_chart, to_chart, BasePoint, ChartId, ChartKind, Sign};
use crate::error::{OctError, Result};
use crate::scalar::{lit, Scalar};
use serde::{Deserialize, Serialize};

/// Fiber coordinate system families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FiberKind {
    /// `(τ, Ξ, η)` over a Cartesian base.
    Cartesian,
    /// `(ξ, ζ, η)` over an NfTf or NfSf base.
    DeSc,
    /// `(ρ, s, η̂)` over an NfTf base, near fiber infinity.
    InfTf,
    /// `(ρ, λ, η̂)` over an NfSf base, near fiber infinity.
    InfSf,
}

/// A fiber chart together with the base chart it sits over.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FiberChartId<S> {
    pub kind: FiberKind,
    pub base: ChartId<S>,
    /// Selects the opposite half-space copy of an `InfTf`/`InfSf` chart.
    pub mirror: bool,
}

impl<S: Scalar> FiberChartId<S> {
    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        let ok = match self.kind {
            FiberKind::Cartesian => self.base.kind == ChartKind::Cartesian && !self.mirror,
            FiberKind::DeSc => {
                matches!(self.base.kind, ChartKind::NfTf | ChartKind::NfSf) && !self.mirror
            }
            FiberKind::InfTf => self.base.kind == ChartKind::NfTf,
            FiberKind::InfSf => self.base.kind == ChartKind::NfSf,
        };
        if ok {
            Ok(())
        } else {
            Err(OctError::IncompatibleCharts(format!(
                "fiber chart {:?} (mirror: {}) incompatible with base chart {:?}",
                self.kind, self.mirror, self.base.kind
            )))
        }
    }
}

/// A chart-tagged point of the compactified phase space.
///
/// `(f1, f2, f3)` reads `(τ, Ξ, η)`, `(ξ, ζ, η)`, `(ρ, s, η̂)` or
/// `(ρ, λ, η̂)` depending on the fiber chart; `η`, `η̂` are nonnegative
/// magnitudes. Mass and sheet sign are not stored; they are arguments to
/// the symbol and characteristic-set queries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint<S> {
    pub base: BasePoint<S>,
    pub fiber_kind: FiberKind,
    pub mirror: bool,
    pub f1: S,
    pub f2: S,
    pub f3: S,
}

impl<S: Scalar> PhasePoint<S> {
    pub fn fiber_chart(&self) -> FiberChartId<S> {
        FiberChartId { kind: self.fiber_kind, base: self.base.chart, mirror: self.mirror }
    }

    pub fn cartesian(t: S, r: S, tau: S, xi_r: S, eta: S) -> Result<Self> {
        let base = BasePoint::cartesian(t, r)?;
        let pt = PhasePoint {
            base,
            fiber_kind: FiberKind::Cartesian,
            mirror: false,
            f1: tau,
            f2: xi_r,
            f3: eta,
        };
        pt.validate()?;
        Ok(pt)
    }

    pub fn desc(base: BasePoint<S>, xi: S, zeta: S, eta: S) -> Result<Self> {
        let pt =
            PhasePoint { base, fiber_kind: FiberKind::DeSc, mirror: false, f1: xi, f2: zeta, f3: eta };
        pt.validate()?;
        Ok(pt)
    }

    pub fn inf_tf(base: BasePoint<S>, mirror: bool, rho: S, s: S, etahat: S) -> Result<Self> {
        let pt = PhasePoint { base, fiber_kind: FiberKind::InfTf, mirror, f1: rho, f2: s, f3: etahat };
        pt.validate()?;
        Ok(pt)
    }

    pub fn inf_sf(base: BasePoint<S>, mirror: bool, rho: S, lambda: S, etahat: S) -> Result<Self> {
        let pt =
            PhasePoint { base, fiber_kind: FiberKind::InfSf, mirror, f1: rho, f2: lambda, f3: etahat };
        pt.validate()?;
        Ok(pt)
    }

    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        self.fiber_chart().validate()?;
        match self.fiber_kind {
            FiberKind::Cartesian | FiberKind::DeSc => {
                if self.f3 < S::zero() {
                    return Err(OctError::InvalidArgument("eta >= 0 required".into()));
                }
            }
            FiberKind::InfTf | FiberKind::InfSf => {
                if self.f1 < S::zero() {
                    return Err(OctError::InvalidArgument("rho >= 0 required".into()));
                }
                if self.f3 < S::zero() {
                    return Err(OctError::InvalidArgument("etahat >= 0 required".into()));
                }
            }
        }
        Ok(())
    }

    /// True when the fiber chart is projective (`InfTf`/`InfSf`) and the
    /// point sits at fiber infinity to within `tol`.
    pub fn at_fiber_infinity(&self, tol: S) -> bool {
        matches!(self.fiber_kind, FiberKind::InfTf | FiberKind::InfSf) && self.f1 <= tol
    }
}

/// Symbol value at a phase point: the raw symbol `p` and the
/// boundary-rescaled `p̃ = ϱ_df² p`, where `ϱ_df = ρ` in the projective
/// charts and `1` in the finite ones. `p̃` stays finite at fiber infinity
/// (while `p` may not).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymbolValue<S> {
    pub p: S,
    pub ptilde: S,
}

/// Klein–Gordon symbol of mass `m` at a phase point, in the point's chart:
///
/// * Cartesian: `p = −τ² + Ξ² + η² + m²`;
/// * DeSc over NfTf: `p = ξ² − 2ξζ + η² + m²`; over NfSf: `−ξ² + 2ξζ + η² + m²`;
/// * InfTf: `p̃ = (s−1)² + η̂² − 1 + ρ²m²`;
/// * InfSf: `p̃ = ¼(λ+1)² + η̂² − 1 + ρ²m²`.
pub fn symbol_p<S: Scalar>(pt: &PhasePoint<S>, m: S) -> SymbolValue<S> {
    let m2 = m * m;
    match pt.fiber_kind {
        FiberKind::Cartesian => {
            let (tau, xi, eta) = (pt.f1, pt.f2, pt.f3);
            let p = -tau * tau + xi * xi + eta * eta + m2;
            SymbolValue { p, ptilde: p }
        }
        FiberKind::DeSc => {
            let (xi, zeta, eta) = (pt.f1, pt.f2, pt.f3);
            let two = lit::<S>(2.0);
            let p = match pt.base.chart.kind {
                ChartKind::NfTf => xi * xi - two * xi * zeta + eta * eta + m2,
                ChartKind::NfSf => -(xi * xi) + two * xi * zeta + eta * eta + m2,
                ChartKind::Cartesian => unreachable!("validated"),
            };
            SymbolValue { p, ptilde: p }
        }
        FiberKind::InfTf => {
            let (rho, s, eh) = (pt.f1, pt.f2, pt.f3);
            let sm1 = s - S::one();
            let ptilde = sm1 * sm1 + eh * eh - S::one() + rho * rho * m2;
            SymbolValue { p: ptilde / (rho * rho), ptilde }
        }
        FiberKind::InfSf => {
            let (rho, la, eh) = (pt.f1, pt.f2, pt.f3);
            let lp1 = la + S::one();
            let ptilde = lit::<S>(0.25) * lp1 * lp1 + eh * eh - S::one() + rho * rho * m2;
            SymbolValue { p: ptilde / (rho * rho), ptilde }
        }
    }
}

/// Membership in the characteristic set: `|p̃| < tol` and the point lies
/// over the boundary of the base (some bdf within `tol` of 0) or at fiber
/// infinity.
pub fn on_characteristic<S: Scalar>(pt: &PhasePoint<S>, m: S, tol: S) -> bool {
    let sv = symbol_p(pt, m);
    sv.ptilde.abs() < tol && (pt.base.on_boundary(tol) || pt.at_fiber_infinity(tol))
}

/// Sheet of the characteristic set: `Sign::Plus` for the positive temporal
/// frequency sheet. Over null infinity the rule is `∓σξ > 0` for the `±`
/// sheet; `None` when `ξ = 0` (resp. `τ = 0`) leaves the sheet undetermined
/// in a finite chart.
pub fn sheet_sign<S: Scalar>(pt: &PhasePoint<S>) -> Option<Sign> {
    let sigma = pt.base.chart.sigma;
    match pt.fiber_kind {
        FiberKind::Cartesian => Sign::of(pt.f1),
        FiberKind::DeSc => Sign::of(-(sigma.value::<S>() * pt.f1)),
        FiberKind::InfTf | FiberKind::InfSf => Some(if pt.mirror { sigma.flip() } else { sigma }),
    }
}

/// The two characteristic solutions `s = 1 ∓ √(1 − η̂² − ρ²m²)` in the
/// InfTf chart, returned as `(s_minus, s_plus)`; `None` outside the
/// hyperboloid cap.
pub fn char_s_branches<S: Scalar>(etahat: S, rho: S, m: S) -> Option<(S, S)> {
    let disc = S::one() - etahat * etahat - rho * rho * m * m;
    if disc < S::zero() {
        return None;
    }
    let root = disc.sqrt();
    Some((S::one() - root, S::one() + root))
}

/// The two characteristic solutions `λ = −1 ± 2√(1 − η̂² − ρ²m²)` in the
/// InfSf chart, returned as `(lambda_minus, lambda_plus)`.
pub fn char_lambda_branches<S: Scalar>(etahat: S, rho: S, m: S) -> Option<(S, S)> {
    let disc = S::one() - etahat * etahat - rho * rho * m * m;
    if disc < S::zero() {
        return None;
    }
    let root = disc.sqrt();
    let two = lit::<S>(2.0);
    Some((-S::one() - two * root, -S::one() + two * root))
}

/// Scale guard for fiber-chart denominators.
fn denom_guard<S: Scalar>(scale: S) -> S {
    lit::<S>(1e-12) * (S::one() + scale.abs())
}

/// Internal carrier: a fiber expressed linearly over an NfTf/NfSf base.
/// `projective` marks a fiber-infinity direction (coordinates defined up to
/// a positive scale).
#[derive(Clone, Copy)]
struct DescFiber<S> {
    xi: S,
    zeta: S,
    eta: S,
    projective: bool,
}

fn desc_from_inf<S: Scalar>(pt: &PhasePoint<S>) -> DescFiber<S> {
    let (rho, c2, eh) = (pt.f1, pt.f2, pt.f3);
    let guard = denom_guard(S::one());
    match pt.fiber_kind {
        FiberKind::InfTf => {
            if rho > guard {
                let zeta = if pt.mirror { rho.recip() } else { -rho.recip() };
                DescFiber { xi: c2 * zeta, zeta, eta: eh / rho, projective: false }
            } else {
                // direction normalized to |zeta| = 1
                let zeta = if pt.mirror { S::one() } else { -S::one() };
                DescFiber { xi: c2 * zeta, zeta, eta: eh, projective: true }
            }
        }
        FiberKind::InfSf => {
            // D = zeta - xi = ±1/rho; zeta = (λ+1)D/2, xi = (λ−1)D/2, eta = η̂|D|
            let half = lit::<S>(0.5);
            if rho > guard {
                let d = if pt.mirror { -rho.recip() } else { rho.recip() };
                DescFiber {
                    xi: half * (c2 - S::one()) * d,
                    zeta: half * (c2 + S::one()) * d,
                    eta: eh / rho,
                    projective: false,
                }
            } else {
                let d = if pt.mirror { -S::one() } else { S::one() };
                DescFiber {
                    xi: half * (c2 - S::one()) * d,
                    zeta: half * (c2 + S::one()) * d,
                    eta: eh,
                    projective: true,
                }
            }
        }
        _ => unreachable!(),
    }
}

fn inf_from_desc<S: Scalar>(
    base: BasePoint<S>,
    f: DescFiber<S>,
    target_kind: FiberKind,
    target_mirror: bool,
) -> Result<PhasePoint<S>> {
    let scale = f.xi.abs().max(f.zeta.abs()).max(f.eta.abs());
    let guard = denom_guard(scale);
    match target_kind {
        FiberKind::InfTf => {
            let denom = f.zeta;
            if denom.abs() <= guard {
                return Err(OctError::FiberChartBoundary("zeta ~ 0".into()));
            }
            let want_neg = !target_mirror;
            if (denom < S::zero()) != want_neg {
                return Err(OctError::FiberChartBoundary(format!(
                    "zeta = {:?} lies in the opposite half-space; use the mirrored chart",
                    denom
                )));
            }
            let rho = if f.projective { S::zero() } else { denom.abs().recip() };
            let s = f.xi / denom;
            let etahat = f.eta / denom.abs();
            PhasePoint::inf_tf(base, target_mirror, rho, s, etahat)
        }
        FiberKind::InfSf => {
            let denom = f.zeta - f.xi;
            if denom.abs() <= guard {
                return Err(OctError::FiberChartBoundary("zeta - xi ~ 0".into()));
            }
            let want_pos = !target_mirror;
            if (denom > S::zero()) != want_pos {
                return Err(OctError::FiberChartBoundary(format!(
                    "zeta - xi = {:?} lies in the opposite half-space; use the mirrored chart",
                    denom
                )));
            }
            let rho = if f.projective { S::zero() } else { denom.abs().recip() };
            let lambda = (f.zeta + f.xi) / denom;
            let etahat = f.eta / denom.abs();
            PhasePoint::inf_sf(base, target_mirror, rho, lambda, etahat)
        }
        _ => unreachable!(),
    }
}

/// Base change NfTf ↔ NfSf with the induced linear fiber map. Works for
/// interior points and for points over the open null face (`ϱ_nf = 0`),
/// where the map extends continuously.
fn cross_null<S: Scalar>(
    base: &BasePoint<S>,
    f: DescFiber<S>,
    target: ChartId<S>,
) -> Result<(BasePoint<S>, DescFiber<S>)> {
    let src = base.chart;
    if src.sigma != target.sigma {
        return Err(OctError::IncompatibleCharts(
            "NfTf/NfSf transitions do not change the half-space sign".into(),
        ));
    }
    let n = base.c1;
    let half = lit::<S>(0.5);
    // ratio = (target rho_nf) / (source rho_nf), with its continuous
    // boundary limit along the null face
    let (new_base, ratio) = if n > S::zero() && base.c2 > S::zero() {
        let (t, r) = from_chart(base)?;
        let nb = to_chart(t, r, target)?;
        (nb, nb.c1 / n)
    } else if n == S::zero() && base.c2 > S::zero() {
        // over the open null face: v = |t| - r is finite
        let v = match src.kind {
            ChartKind::NfTf => base.c2.recip() - src.offset,
            ChartKind::NfSf => src.offset - base.c2.recip(),
            ChartKind::Cartesian => unreachable!(),
        };
        let c2_new = match target.kind {
            ChartKind::NfSf => {
                let gap = target.offset - v;
                if gap <= S::zero() {
                    return Err(OctError::OutOfRegion(format!(
                        "|t| < r + R required on the target chart (R - v = {:?})",
                        gap
                    )));
                }
                gap.recip()
            }
            ChartKind::NfTf => {
                let gap = v + target.offset;
                if gap <= S::zero() {
                    return Err(OctError::OutOfRegion(format!(
                        "|t| + T > r required on the target chart (v + T = {:?})",
                        gap
                    )));
                }
                gap.recip()
            }
            ChartKind::Cartesian => unreachable!(),
        };
        let ratio = (base.c2 / c2_new).sqrt();
        (BasePoint { chart: target, c1: S::zero(), c2: c2_new }, ratio)
    } else {
        return Err(OctError::OutOfRegion(
            "point over a corner or timelike/spacelike cap has no NfTf<->NfSf transition".into(),
        ));
    };
    let nu = new_base.c1;
    let fiber = match (src.kind, target.kind) {
        (ChartKind::NfTf, ChartKind::NfSf) => {
            let xi_new = f.xi / ratio;
            let zeta_new = ratio * (half * (S::one() - n * n) * f.xi - f.zeta)
                + half * (S::one() + nu * nu) * f.xi / ratio;
            DescFiber { xi: xi_new, zeta: zeta_new, eta: f.eta, projective: f.projective }
        }
        (ChartKind::NfSf, ChartKind::NfTf) => {
            let xi_new = f.xi / ratio;
            let zeta_new = half * (S::one() - nu * nu) * f.xi / ratio - ratio * f.zeta
                + half * ratio * (S::one() + n * n) * f.xi;
            DescFiber { xi: xi_new, zeta: zeta_new, eta: f.eta, projective: f.projective }
        }
        _ => {
            return Err(OctError::IncompatibleCharts("cross_null handles NfTf<->NfSf only".into()))
        }
    };
    Ok((new_base, fiber))
}

/// Cartesian data from a DeSc fiber at an interior point.
fn cartesian_from_desc<S: Scalar>(
    base: &BasePoint<S>,
    f: &DescFiber<S>,
) -> Result<(S, S, S, S, S)> {
    if f.projective {
        return Err(OctError::FiberChartBoundary(
            "fiber-infinity point has no Cartesian fiber representation".into(),
        ));
    }
    let (t, r) = from_chart(base)?;
    let n = base.c1;
    let half = lit::<S>(0.5);
    let sigma: S = base.chart.sigma.value();
    let (tau, xi_r) = match base.chart.kind {
        ChartKind::NfTf => {
            let tau = sigma * (half * (S::one() - n * n) * f.xi / n - f.zeta / n);
            let xi_r = -half * (S::one() + n * n) * f.xi / n + f.zeta / n;
            (tau, xi_r)
        }
        ChartKind::NfSf => {
            let tau = sigma * (-half * (S::one() + n * n) * f.xi / n + f.zeta / n);
            let xi_r = half * (S::one() - n * n) * f.xi / n - f.zeta / n;
            (tau, xi_r)
        }
        ChartKind::Cartesian => unreachable!(),
    };
    Ok((t, r, tau, xi_r, f.eta))
}

/// DeSc fiber from Cartesian data on a target NfTf/NfSf chart.
fn desc_from_cartesian<S: Scalar>(
    t: S,
    r: S,
    tau: S,
    xi_r: S,
    eta: S,
    target: ChartId<S>,
) -> Result<(BasePoint<S>, DescFiber<S>)> {
    let nb = to_chart(t, r, target)?;
    let n = nb.c1;
    let half = lit::<S>(0.5);
    let u = target.sigma.value::<S>() * tau;
    let xi = -(u + xi_r) / n;
    let zeta = match target.kind {
        ChartKind::NfTf => half * (S::one() - n * n) * xi - n * u,
        ChartKind::NfSf => n * u + half * (S::one() + n * n) * xi,
        ChartKind::Cartesian => unreachable!(),
    };
    Ok((nb, DescFiber { xi, zeta, eta, projective: false }))
}

/// Expresses the covector at `pt` in the `target` fiber chart.
///
/// Transitions exist between charts whose validity regions overlap and
/// contain the point: Cartesian ↔ DeSc (interior base), DeSc over NfTf ↔
/// DeSc over NfSf (interior or open null face), DeSc ↔ InfTf/InfSf over the
/// same base kind, and compositions of these (fiber-infinity points move
/// between `InfTf` and `InfSf` projectively). Half-space violations and
/// vanishing denominators produce errors.
pub fn fiber_transition<S: Scalar>(
    pt: &PhasePoint<S>,
    target: FiberChartId<S>,
) -> Result<PhasePoint<S>> {
    pt.validate()?;
    target.validate()?;
    if pt.fiber_chart() == target {
        return Ok(*pt);
    }

    enum Carrier<S> {
        Cart { t: S, r: S, tau: S, xi_r: S, eta: S },
        Desc { base: BasePoint<S>, fiber: DescFiber<S> },
    }

    let carrier = match pt.fiber_kind {
        FiberKind::Cartesian => {
            Carrier::Cart { t: pt.base.c1, r: pt.base.c2, tau: pt.f1, xi_r: pt.f2, eta: pt.f3 }
        }
        FiberKind::DeSc => Carrier::Desc {
            base: pt.base,
            fiber: DescFiber { xi: pt.f1, zeta: pt.f2, eta: pt.f3, projective: false },
        },
        FiberKind::InfTf | FiberKind::InfSf => {
            Carrier::Desc { base: pt.base, fiber: desc_from_inf(pt) }
        }
    };

    let (base, fiber) = match (carrier, target.base.kind) {
        (Carrier::Cart { t, r, tau, xi_r, eta }, ChartKind::Cartesian) => {
            return PhasePoint::cartesian(t, r, tau, xi_r, eta);
        }
        (Carrier::Cart { t, r, tau, xi_r, eta }, _) => {
            desc_from_cartesian(t, r, tau, xi_r, eta, target.base)?
        }
        (Carrier::Desc { base, fiber }, ChartKind::Cartesian) => {
            let (t, r, tau, xi_r, eta) = cartesian_from_desc(&base, &fiber)?;
            return PhasePoint::cartesian(t, r, tau, xi_r, eta);
        }
        (Carrier::Desc { base, fiber }, _) => {
            if base.chart == target.base {
                (base, fiber)
            } else if base.chart.kind != target.base.kind {
                cross_null(&base, fiber, target.base)?
            } else {
                // same kind, different offset or sign: through the interior
                let (t, r, tau, xi_r, eta) = cartesian_from_desc(&base, &fiber)?;
                desc_from_cartesian(t, r, tau, xi_r, eta, target.base)?
            }
        }
    };

    match target.kind {
        FiberKind::Cartesian => unreachable!("handled above"),
        FiberKind::DeSc => {
            if fiber.projective {
                return Err(OctError::FiberChartBoundary(
                    "fiber-infinity point has no finite DeSc representation".into(),
                ));
            }
            PhasePoint::desc(base, fiber.xi, fiber.zeta, fiber.eta)
        }
        FiberKind::InfTf | FiberKind::InfSf => {
            inf_from_desc(base, fiber, target.kind, target.mirror)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn nftf_base(sigma: Sign, t_shift: f64, c1: f64, c2: f64) -> BasePoint<f64> {
        BasePoint { chart: ChartId::nftf(sigma, t_shift), c1, c2 }
    }

    fn nfsf_base(sigma: Sign, r_shift: f64, c1: f64, c2: f64) -> BasePoint<f64> {
        BasePoint { chart: ChartId::nfsf(sigma, r_shift), c1, c2 }
    }

    #[test]
    fn symbol_worked_examples() {
        let m = 1.3;
        // (xi, zeta, eta) = (m, m, 0) over nf lies in the characteristic set
        let pt = PhasePoint::desc(nftf_base(Sign::Plus, 1.0, 0.0, 0.5), m, m, 0.0).unwrap();
        assert_relative_eq!(symbol_p(&pt, m).p, 0.0, epsilon = 1e-14);

        // InfTf (rho, s, etahat) = (0, 0, 0): the fiber-infinity endpoint set
        let pt =
            PhasePoint::inf_tf(nftf_base(Sign::Plus, 1.0, 0.0, 0.5), false, 0.0, 0.0, 0.0).unwrap();
        assert_eq!(symbol_p(&pt, m).ptilde, 0.0);

        // InfSf (0, -1, 1): the large-angular-momentum set
        let pt =
            PhasePoint::inf_sf(nfsf_base(Sign::Plus, 1.0, 0.0, 0.0), false, 0.0, -1.0, 1.0).unwrap();
        assert_eq!(symbol_p(&pt, m).ptilde, 0.0);
    }

    #[test]
    fn characteristic_membership() {
        let m = 1.0;
        let on = PhasePoint::desc(nftf_base(Sign::Plus, 1.0, 0.0, 0.5), m, m, 0.0).unwrap();
        assert!(on_characteristic(&on, m, 1e-10));

        let off = PhasePoint::desc(nftf_base(Sign::Plus, 1.0, 0.0, 0.5), m, 0.0, 0.0).unwrap();
        assert!(!on_characteristic(&off, m, 1e-10)); // p = 2m^2

        // interior point with p = 0 is not in the (boundary) characteristic set
        let interior = PhasePoint::cartesian(3.0, 1.0, m, 0.0, 0.0).unwrap();
        assert_relative_eq!(symbol_p(&interior, m).p, 0.0, epsilon = 1e-14);
        assert!(!on_characteristic(&interior, m, 1e-10));
    }

    #[test]
    fn sheet_sign_rules() {
        let b = nftf_base(Sign::Plus, 1.0, 0.0, 0.5);
        let neg_xi = PhasePoint::desc(b, -1.0, -1.0, 0.0).unwrap();
        assert_eq!(sheet_sign(&neg_xi), Some(Sign::Plus));
        let pos_xi = PhasePoint::desc(b, 1.0, 1.0, 0.0).unwrap();
        assert_eq!(sheet_sign(&pos_xi), Some(Sign::Minus));
        let zero = PhasePoint::desc(b, 0.0, 1.0, 0.0).unwrap();
        assert_eq!(sheet_sign(&zero), None);

        let cart = PhasePoint::cartesian(3.0, 1.0, 2.0, 0.0, 0.0).unwrap();
        assert_eq!(sheet_sign(&cart), Some(Sign::Plus));

        // mirrored projective charts hold the opposite sheet
        let inf = PhasePoint::inf_tf(b, false, 0.2, 1.0, 0.0).unwrap();
        assert_eq!(sheet_sign(&inf), Some(Sign::Plus));
        let inf_m = PhasePoint::inf_tf(b, true, 0.2, 1.0, 0.0).unwrap();
        assert_eq!(sheet_sign(&inf_m), Some(Sign::Minus));
    }

    #[test]
    fn transition_halfspace_guard() {
        let m = 1.0;
        let b = nftf_base(Sign::Plus, 1.0, 0.0, 0.5);
        let pt = PhasePoint::desc(b, m, m, 0.0).unwrap();
        // zeta = m > 0 violates the {zeta < 0} half-space of the plain chart
        let target = FiberChartId { kind: FiberKind::InfTf, base: b.chart, mirror: false };
        assert!(matches!(fiber_transition(&pt, target), Err(OctError::FiberChartBoundary(_))));

        // ... and lands in the mirrored chart instead
        let target_m = FiberChartId { kind: FiberKind::InfTf, base: b.chart, mirror: true };
        let q = fiber_transition(&pt, target_m).unwrap();
        assert_relative_eq!(q.f1, 1.0 / m, max_relative = 1e-15);
        assert_relative_eq!(q.f2, 1.0, max_relative = 1e-15);

        let ptn = PhasePoint::desc(b, -m, -m, 0.0).unwrap();
        let q = fiber_transition(&ptn, target).unwrap();
        assert_relative_eq!(q.f1, 1.0 / m, max_relative = 1e-15);
        assert_relative_eq!(q.f2, 1.0, max_relative = 1e-15);
        assert_eq!(q.f3, 0.0);
    }

    #[test]
    fn cartesian_desc_round_trip() {
        let m = 0.7;
        let cart = PhasePoint::cartesian(3.0, 1.0, m, 0.0, 0.0).unwrap();
        let target = FiberChartId {
            kind: FiberKind::DeSc,
            base: ChartId::nftf(Sign::Plus, 0.0),
            mirror: false,
        };
        let d = fiber_transition(&cart, target).unwrap();
        assert_relative_eq!(symbol_p(&d, m).p, symbol_p(&cart, m).p, epsilon = 1e-12);
        let back = fiber_transition(
            &d,
            FiberChartId { kind: FiberKind::Cartesian, base: ChartId::cartesian(), mirror: false },
        )
        .unwrap();
        assert_relative_eq!(back.base.c1, 3.0, max_relative = 1e-12);
        assert_relative_eq!(back.base.c2, 1.0, max_relative = 1e-12);
        assert_relative_eq!(back.f1, m, max_relative = 1e-12);
        assert!(f64::abs(back.f2) < 1e-12);
    }

    #[test]
    fn symbol_invariance_under_transitions() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let m = 1.0;
        let mut checked = 0;
        while checked < 2000 {
            let t: f64 = rng.gen_range(0.5..30.0);
            let r: f64 = rng.gen_range(0.5..30.0);
            let tau: f64 = rng.gen_range(-3.0..3.0);
            let xi_r: f64 = rng.gen_range(-3.0..3.0);
            let eta: f64 = rng.gen_range(0.0..2.0);
            let cart = PhasePoint::cartesian(t, r, tau, xi_r, eta).unwrap();
            let p0 = symbol_p(&cart, m).p;
            for chart in [
                ChartId::nftf(Sign::Plus, 5.0),
                ChartId::nfsf(Sign::Plus, 35.0),
                ChartId::nftf(Sign::Plus, 40.0),
            ] {
                let target = FiberChartId { kind: FiberKind::DeSc, base: chart, mirror: false };
                let Ok(d) = fiber_transition(&cart, target) else { continue };
                let p1 = symbol_p(&d, m).p;
                let fiber_scale = 1.0 + d.f1.abs().max(d.f2.abs()).powi(2);
                assert!(
                    (p1 - p0).abs() <= 1e-12 * (1.0 + p0.abs()) * fiber_scale,
                    "symbol not invariant: {p0} vs {p1}"
                );
                for (kind, mirror) in [
                    (FiberKind::InfTf, false),
                    (FiberKind::InfTf, true),
                    (FiberKind::InfSf, false),
                    (FiberKind::InfSf, true),
                ] {
                    let inf_kind_base = match kind {
                        FiberKind::InfTf => ChartKind::NfTf,
                        _ => ChartKind::NfSf,
                    };
                    if inf_kind_base != chart.kind {
                        continue;
                    }
                    let target = FiberChartId { kind, base: chart, mirror };
                    if let Ok(q) = fiber_transition(&d, target) {
                        let sv = symbol_p(&q, m);
                        // ptilde = rho^2 * p exactly
                        assert_relative_eq!(
                            sv.ptilde,
                            q.f1 * q.f1 * p0,
                            epsilon = 1e-10,
                            max_relative = 1e-10
                        );
                        checked += 1;
                    }
                }
            }
            checked += 1;
        }
    }

    #[test]
    fn cross_null_preserves_symbol_on_boundary() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let m = 1.0;
        for _ in 0..500 {
            // a point over the open future null face in NfTf coordinates
            let v: f64 = rng.gen_range(-0.5..3.0); // |t| - r
            let t_shift = 1.0;
            let r_shift = 4.0;
            let base = nftf_base(Sign::Plus, t_shift, 0.0, 1.0 / (v + t_shift));
            let xi: f64 = rng.gen_range(-3.0..3.0);
            let zeta: f64 = rng.gen_range(-3.0..3.0);
            let eta: f64 = rng.gen_range(0.0..1.5);
            let pt = PhasePoint::desc(base, xi, zeta, eta).unwrap();
            let target = FiberChartId {
                kind: FiberKind::DeSc,
                base: ChartId::nfsf(Sign::Plus, r_shift),
                mirror: false,
            };
            let q = fiber_transition(&pt, target).unwrap();
            assert_eq!(q.base.c1, 0.0);
            assert_relative_eq!(q.base.c2, 1.0 / (r_shift - v), max_relative = 1e-13);
            let (pa, pb) = (symbol_p(&pt, m).p, symbol_p(&q, m).p);
            assert!(
                (pa - pb).abs() <= 1e-10 * (1.0 + pa.abs() + pb.abs() + q.f1.abs() + q.f2.abs()),
                "boundary transition broke the symbol: {pa} vs {pb}"
            );
            // and back
            let back = fiber_transition(&q, pt.fiber_chart()).unwrap();
            assert_relative_eq!(back.f1, xi, epsilon = 1e-10, max_relative = 1e-10);
            assert_relative_eq!(back.f2, zeta, epsilon = 1e-10, max_relative = 1e-10);
        }
    }

    #[test]
    fn sheet_sign_consistent_across_transitions_on_sigma() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let m = 1.0;
        let t_shift = 1.0;
        let r_shift = 4.0;
        for _ in 0..400 {
            let v: f64 = rng.gen_range(-0.5..3.0);
            let base = nftf_base(Sign::Plus, t_shift, 0.0, 1.0 / (v + t_shift));
            let mut xi: f64 = rng.gen_range(-3.0..3.0);
            if xi.abs() < 0.05 {
                xi = 0.5;
            }
            let eta: f64 = rng.gen_range(0.0..1.5);
            let zeta = (xi * xi + eta * eta + m * m) / (2.0 * xi);
            let pt = PhasePoint::desc(base, xi, zeta, eta).unwrap();
            assert!(on_characteristic(&pt, m, 1e-10));
            let expected = sheet_sign(&pt).unwrap();

            let to_sf = FiberChartId {
                kind: FiberKind::DeSc,
                base: ChartId::nfsf(Sign::Plus, r_shift),
                mirror: false,
            };
            let q = fiber_transition(&pt, to_sf).unwrap();
            assert_eq!(sheet_sign(&q), Some(expected), "DeSc cross-null sheet flip");

            for (kind, base_chart) in [
                (FiberKind::InfTf, pt.base.chart),
                (FiberKind::InfSf, q.base.chart),
            ] {
                for mirror in [false, true] {
                    let target = FiberChartId { kind, base: base_chart, mirror };
                    if let Ok(w) = fiber_transition(&pt, target) {
                        assert_eq!(
                            sheet_sign(&w),
                            Some(expected),
                            "projective chart sheet flip at {w:?}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn characteristic_hyperboloid_solutions() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let m = 1.0;
        let mut n = 0;
        while n < 1000 {
            let etahat: f64 = rng.gen_range(0.0..1.0);
            let rho: f64 = rng.gen_range(0.0..1.0);
            if etahat * etahat + rho * rho * m * m > 1.0 {
                continue;
            }
            let (s_lo, s_hi) = char_s_branches(etahat, rho, m).unwrap();
            for s in [s_lo, s_hi] {
                let base = nftf_base(Sign::Plus, 1.0, 0.0, 0.7);
                let pt = PhasePoint::inf_tf(base, false, rho, s, etahat).unwrap();
                assert!(
                    on_characteristic(&pt, m, 1e-12),
                    "s-branch point off the characteristic set"
                );
            }
            let (la_lo, la_hi) = char_lambda_branches(etahat, rho, m).unwrap();
            for la in [la_lo, la_hi] {
                let base = nfsf_base(Sign::Plus, 1.0, 0.0, 0.7);
                let pt = PhasePoint::inf_sf(base, false, rho, la, etahat).unwrap();
                assert!(on_characteristic(&pt, m, 1e-12));
            }
            n += 1;
        }
    }

    #[test]
    fn fiber_infinity_crosses_null_charts() {
        // A fiber-infinity point over nf in the InfSf chart moves to the
        // InfTf chart over the same base point, staying on the hyperboloid.
        let m = 1.0;
        let v = 0.5;
        let r_shift = 2.0;
        let t_shift = 1.0;
        let base = nfsf_base(Sign::Plus, r_shift, 0.0, 1.0 / (r_shift - v));
        let eh_mid = (1.0f64 - (1.4f64 / 2.0).powi(2)).sqrt();
        let mut mapped = 0;
        for (la, eh) in [(-1.0, 1.0), (-3.0, 0.0), (0.4, eh_mid)] {
            let pt = PhasePoint::inf_sf(base, false, 0.0, la, eh).unwrap();
            assert!(on_characteristic(&pt, m, 1e-12));
            for mirror in [false, true] {
                let target = FiberChartId {
                    kind: FiberKind::InfTf,
                    base: ChartId::nftf(Sign::Plus, t_shift),
                    mirror,
                };
                if let Ok(q) = fiber_transition(&pt, target) {
                    assert_eq!(q.f1, 0.0, "projective image must stay at fiber infinity");
                    assert!(
                        on_characteristic(&q, m, 1e-10),
                        "image left the characteristic set: {q:?}"
                    );
                    mapped += 1;
                }
            }
        }
        assert!(mapped >= 3, "no fiber-infinity transitions succeeded");
    }
}
