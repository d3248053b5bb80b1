//! Geometric phases of a level pair around conical intersections.
//!
//! Real block eigenvectors carry no Berry phase, so the pair basis is
//! complexified, `|φ±⟩ = (|n₊,+⟩ ± i|(n+l)₋,−⟩)/√2`. In that basis the block
//! reads
//!
//! ```text
//! h11 = h22 = (n + l/2)ω − g²/ω,   h12 = h21* = ½(ε − lω) − (i/2)Ω_nl
//! ```
//!
//! with eigenstates `ψ₊ = (φ₊ + e^{iθ}φ₋)/√2`, `ψ₋ = (−e^{−iθ}φ₊ + φ₋)/√2` and
//! `θ = atan2(Ω_nl, ε − lω)`. Around a closed loop in `(g, ε)` the angle winds
//! by `2πm` and the phases are `γ± = ∓mπ`.
//!
//! Loops are counterclockwise in the `(g, ε)` plane (g horizontal) unless
//! built with [`Orientation::Clockwise`].

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaa::{self, Approximation};
use crate::model::{validate, BlockIndex, ModelParams};

/// Minimum distance, in units of `ω`, between a loop and any intersection.
pub const CI_PROXIMITY: f64 = 1e-6;

/// Largest angle change accepted on one loop segment.
pub const MAX_SEGMENT_TURN: f64 = PI / 2.0;

/// Consecutive Wilson-loop overlaps smaller than this abort the computation.
pub const MIN_LINK_OVERLAP: f64 = 0.5;

const MAX_REFINE_DEPTH: u32 = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    #[default]
    Counterclockwise,
    Clockwise,
}

/// Upper (`Plus`) or lower (`Minus`) member of the level pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Band {
    Plus,
    Minus,
}

impl Band {
    /// `γ = sign · m π`
    fn phase_sign(self) -> f64 {
        match self {
            Band::Plus => -1.0,
            Band::Minus => 1.0,
        }
    }
}

impl std::str::FromStr for Band {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plus" | "+" | "upper" => Ok(Band::Plus),
            "minus" | "-" | "lower" => Ok(Band::Minus),
            other => Err(Error::InvalidArgument(format!("unknown band `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseMethod {
    AnalyticWinding,
    WilsonLoop,
}

/// Closed polygon in the `(g, ε)` plane; the last point repeats the first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoopTrajectory {
    pub points: Vec<(f64, f64)>,
    pub orientation: Orientation,
    /// Number of segments.
    pub steps: usize,
}

impl LoopTrajectory {
    /// Rectangle `[g_min, g_max] × [ε_min, ε_max]` starting at the lower-left
    /// corner, with steps spread over the edges in proportion to their length.
    pub fn rectangle(g: (f64, f64), epsilon: (f64, f64), steps: usize, orientation: Orientation) -> Result<Self> {
        let ((g0, g1), (e0, e1)) = (g, epsilon);
        if !(g0 < g1 && e0 < e1) || ![g0, g1, e0, e1].iter().all(|x| x.is_finite()) {
            return Err(Error::InvalidArgument(format!("degenerate rectangle g {g:?} epsilon {epsilon:?}")));
        }
        if g0 < 0.0 {
            return Err(Error::InvalidArgument("loop must stay at g >= 0".into()));
        }
        if steps < 4 {
            return Err(Error::InvalidArgument("a rectangle needs at least 4 steps".into()));
        }
        let corners = [(g0, e0), (g1, e0), (g1, e1), (g0, e1), (g0, e0)];
        let perimeter = 2.0 * ((g1 - g0) + (e1 - e0));
        let mut points = vec![corners[0]];
        for w in corners.windows(2) {
            let (a, b) = (w[0], w[1]);
            let len = (b.0 - a.0).abs() + (b.1 - a.1).abs();
            let edge_steps = ((steps as f64 * len / perimeter).round() as usize).max(1);
            for i in 1..=edge_steps {
                let t = i as f64 / edge_steps as f64;
                points.push((a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1)));
            }
        }
        // exact closure
        *points.last_mut().unwrap() = corners[0];
        let mut trajectory =
            LoopTrajectory { steps: points.len() - 1, points, orientation: Orientation::Counterclockwise };
        if orientation == Orientation::Clockwise {
            trajectory = trajectory.reversed();
        }
        Ok(trajectory)
    }

    /// Same path traversed the other way.
    pub fn reversed(&self) -> Self {
        let mut points = self.points.clone();
        points.reverse();
        let orientation = match self.orientation {
            Orientation::Counterclockwise => Orientation::Clockwise,
            Orientation::Clockwise => Orientation::Counterclockwise,
        };
        LoopTrajectory { points, orientation, steps: self.steps }
    }

    pub fn is_closed(&self) -> bool {
        self.points.len() >= 2 && self.points.first() == self.points.last()
    }

    fn g_extent(&self) -> f64 {
        self.points.iter().fold(0.0f64, |m, p| m.max(p.0))
    }

    /// Twice the signed area (shoelace); positive for counterclockwise.
    pub fn signed_area(&self) -> f64 {
        0.5 * self.points.windows(2).map(|w| w[0].0 * w[1].1 - w[1].0 * w[0].1).sum::<f64>()
    }

    /// Winding number of the polygon around `point` (ray casting with sign).
    pub fn encloses(&self, point: (f64, f64)) -> i32 {
        let (x, y) = point;
        let mut wn = 0;
        for w in self.points.windows(2) {
            let ((x0, y0), (x1, y1)) = (w[0], w[1]);
            let cross = (x1 - x0) * (y - y0) - (x - x0) * (y1 - y0);
            if y0 <= y {
                if y1 > y && cross > 0.0 {
                    wn += 1;
                }
            } else if y1 <= y && cross < 0.0 {
                wn -= 1;
            }
        }
        wn
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BerryPhaseResult {
    pub n: usize,
    pub l: usize,
    pub band: Band,
    /// Number of full turns of θ along the loop.
    pub winding: i64,
    /// Radians. Continuous (not reduced mod 2π).
    pub phase: f64,
    pub method: PhaseMethod,
}

impl BerryPhaseResult {
    pub fn phase_over_pi(&self) -> f64 {
        self.phase / PI
    }
}

/// The pair block in the complexified basis `(|φ₊⟩, |φ₋⟩)`. The bias enters
/// with its sign so that loops may cross `ε = 0`.
pub fn complexified_block(params: &ModelParams, idx: BlockIndex, approx: Approximation) -> [[Complex64; 2]; 2] {
    let omega_nl = gaa::tunneling(params, idx, approx);
    let diag = Complex64::new(idx.center_energy(params), 0.0);
    let h12 = Complex64::new(0.5 * (params.epsilon - idx.l as f64 * params.omega), -0.5 * omega_nl);
    [[diag, h12], [h12.conj(), diag]]
}

/// Everything about the model except the loop coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairSetup {
    pub idx: BlockIndex,
    pub delta: f64,
    pub omega: f64,
    pub approx: Approximation,
}

impl PairSetup {
    pub fn new(idx: BlockIndex, delta: f64, omega: f64, approx: Approximation) -> Result<Self> {
        validate(ModelParams { delta, omega, g: 0.0, epsilon: 0.0 })?;
        Ok(PairSetup { idx, delta, omega, approx })
    }

    /// Parameters at a loop point; the block index stays fixed along the loop.
    pub fn params_at(&self, (g, epsilon): (f64, f64)) -> ModelParams {
        ModelParams { delta: self.delta, omega: self.omega, g, epsilon }
    }

    /// `(ε − lω, Ω_nl)` at a loop point. ε keeps its sign here: loops may cross ε = 0.
    pub fn field_vector(&self, point: (f64, f64)) -> (f64, f64) {
        let params = self.params_at(point);
        let omega_nl = gaa::tunneling(&params, self.idx, self.approx);
        (point.1 - self.idx.l as f64 * self.omega, omega_nl)
    }

    /// Points where the pair is degenerate inside `g ∈ [0, g_max]`.
    pub fn intersections(&self, g_max: f64) -> Result<Vec<(f64, f64)>> {
        let eps = self.idx.l as f64 * self.omega;
        let mut cis: Vec<(f64, f64)> = match self.approx {
            // AA crossings sit at Laguerre zeros, independent of Δ
            Approximation::Aa => crate::constraints::isolate_roots(
                |u| crate::adiabatic::laguerre(self.idx.n, self.idx.l as f64, 4.0 * u / (self.omega * self.omega)),
                g_max * g_max,
            )
            .0
            .into_iter()
            .map(|u| (u.sqrt(), eps))
            .collect(),
            _ => gaa::locate_cis(self.idx.n, self.idx.l, self.delta, self.omega, g_max)?
                .into_iter()
                .map(|ci| (ci.g_star, ci.epsilon_star))
                .collect(),
        };
        if self.idx.l > 0 || self.delta == 0.0 {
            // Ω ∝ g^l (or Δ) vanishes on the axis
            cis.insert(0, (0.0, eps));
        }
        Ok(cis)
    }
}

/// Mixing angle `θ = atan2(Ω_nl, ε − lω)` at `point`.
pub fn theta_field(point: (f64, f64), setup: &PairSetup) -> Result<f64> {
    let (x, y) = setup.field_vector(point);
    if x == 0.0 && y == 0.0 {
        return Err(Error::Degenerate { g: point.0, epsilon: point.1 });
    }
    Ok(y.atan2(x))
}

/// Wraps an angle difference into `(−π, π]`.
pub fn wrap_angle(x: f64) -> f64 {
    let mut y = x.rem_euclid(TAU);
    if y > PI {
        y -= TAU;
    }
    y
}

fn segment_distance(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 { 0.0 } else { (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0) };
    let (cx, cy) = (a.0 + t * dx, a.1 + t * dy);
    (p.0 - cx).hypot(p.1 - cy)
}

/// Fails when any segment of the loop passes within [`CI_PROXIMITY`] (in
/// units of ω) of an intersection.
pub fn check_proximity(trajectory: &LoopTrajectory, setup: &PairSetup) -> Result<()> {
    let w = setup.omega;
    for ci in setup.intersections(trajectory.g_extent() + 1.0)? {
        let scaled_ci = (ci.0 / w, ci.1 / w);
        for seg in trajectory.points.windows(2) {
            let d = segment_distance(scaled_ci, (seg[0].0 / w, seg[0].1 / w), (seg[1].0 / w, seg[1].1 / w));
            if d < CI_PROXIMITY {
                return Err(Error::TooCloseToIntersection { g: ci.0, epsilon: ci.1, distance: d * w });
            }
        }
    }
    Ok(())
}

/// Accumulated turn of θ from `a` to `b`, halving the segment until every
/// piece turns by at most [`MAX_SEGMENT_TURN`].
fn segment_turn(
    setup: &PairSetup,
    a: (f64, f64),
    b: (f64, f64),
    theta_a: f64,
    theta_b: f64,
    depth: u32,
) -> Result<f64> {
    let turn = wrap_angle(theta_b - theta_a);
    if turn.abs() <= MAX_SEGMENT_TURN {
        return Ok(turn);
    }
    if depth >= MAX_REFINE_DEPTH {
        return Err(Error::InsufficientResolution(format!(
            "angle turns by {turn:.3} rad between {a:?} and {b:?} after {MAX_REFINE_DEPTH} refinements"
        )));
    }
    let mid = (0.5 * (a.0 + b.0), 0.5 * (a.1 + b.1));
    let theta_mid = theta_field(mid, setup)?;
    Ok(segment_turn(setup, a, mid, theta_a, theta_mid, depth + 1)?
        + segment_turn(setup, mid, b, theta_mid, theta_b, depth + 1)?)
}

/// Total turn of θ along the loop divided by 2π.
pub fn winding_number(trajectory: &LoopTrajectory, setup: &PairSetup) -> Result<i64> {
    if !trajectory.is_closed() {
        return Err(Error::InvalidArgument("loop is not closed".into()));
    }
    check_proximity(trajectory, setup)?;
    let thetas = trajectory.points.iter().map(|&p| theta_field(p, setup)).collect::<Result<Vec<_>>>()?;
    let mut total = 0.0;
    for (i, seg) in trajectory.points.windows(2).enumerate() {
        total += segment_turn(setup, seg[0], seg[1], thetas[i], thetas[i + 1], 0)?;
    }
    let m = total / TAU;
    let rounded = m.round();
    if (m - rounded).abs() > 1e-6 {
        return Err(Error::InsufficientResolution(format!("winding {m} is not an integer")));
    }
    Ok(rounded as i64)
}

/// `γ± = ∓mπ` from the winding of θ.
pub fn berry_phase(trajectory: &LoopTrajectory, setup: &PairSetup, band: Band) -> Result<BerryPhaseResult> {
    let winding = winding_number(trajectory, setup)?;
    Ok(BerryPhaseResult {
        n: setup.idx.n,
        l: setup.idx.l,
        band,
        winding,
        phase: band.phase_sign() * winding as f64 * PI,
        method: PhaseMethod::AnalyticWinding,
    })
}

/// Supplies normalized eigenstates of the complexified block along a loop.
pub trait EigenstateSource {
    fn block_index(&self) -> BlockIndex;

    /// Components on `(|φ₊⟩, |φ₋⟩)`.
    fn state(&self, point: (f64, f64), band: Band) -> Result<[Complex64; 2]>;
}

/// Closed-form eigenstates in the gauge `ψ₊ = (φ₊ + e^{iθ}φ₋)/√2`,
/// `ψ₋ = (−e^{−iθ}φ₊ + φ₋)/√2`.
#[derive(Debug, Clone, Copy)]
pub struct GaugeFixedStates(pub PairSetup);

impl EigenstateSource for GaugeFixedStates {
    fn block_index(&self) -> BlockIndex {
        self.0.idx
    }

    fn state(&self, point: (f64, f64), band: Band) -> Result<[Complex64; 2]> {
        let theta = theta_field(point, &self.0)?;
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Ok(match band {
            Band::Plus => [Complex64::new(s, 0.0), Complex64::from_polar(s, theta)],
            Band::Minus => [-Complex64::from_polar(s, -theta), Complex64::new(s, 0.0)],
        })
    }
}

/// Eigenstates from diagonalizing the complexified block numerically. The
/// phase convention makes the first nonzero component real and positive,
/// which is a different gauge from [`GaugeFixedStates`].
#[derive(Debug, Clone, Copy)]
pub struct DiagonalizedStates(pub PairSetup);

impl EigenstateSource for DiagonalizedStates {
    fn block_index(&self) -> BlockIndex {
        self.0.idx
    }

    fn state(&self, point: (f64, f64), band: Band) -> Result<[Complex64; 2]> {
        let h = complexified_block(&self.0.params_at(point), self.0.idx, self.0.approx);
        hermitian2_eigenvector(h, band).ok_or(Error::Degenerate { g: point.0, epsilon: point.1 })
    }
}

/// Eigenvector of a 2×2 Hermitian matrix for the upper or lower eigenvalue.
fn hermitian2_eigenvector(h: [[Complex64; 2]; 2], band: Band) -> Option<[Complex64; 2]> {
    let (a, d, b) = (h[0][0].re, h[1][1].re, h[0][1]);
    let half_diff = 0.5 * (a - d);
    let r = half_diff.hypot(b.norm());
    if r == 0.0 {
        return None;
    }
    let lambda = 0.5 * (a + d) + if band == Band::Plus { r } else { -r };
    // rows of (H − λ) give two candidate null vectors; keep the better conditioned
    let v1 = [b, Complex64::new(lambda - a, 0.0)];
    let v2 = [Complex64::new(lambda - d, 0.0), b.conj()];
    let n1 = v1[0].norm_sqr() + v1[1].norm_sqr();
    let n2 = v2[0].norm_sqr() + v2[1].norm_sqr();
    let (v, norm) = if n1 >= n2 { (v1, n1.sqrt()) } else { (v2, n2.sqrt()) };
    let lead = if v[0].norm() > 1e-300 { v[0] } else { v[1] };
    let phase = lead.conj() / lead.norm();
    Some([v[0] * phase / norm, v[1] * phase / norm])
}

/// Discrete Berry phase `−Σ_k arg⟨ψ_k|ψ_{k+1}⟩` along the loop.
///
/// The link phases are summed individually so that a ±π result keeps its sign
/// in a smooth gauge; the sum equals `−arg ∏_k ⟨ψ_k|ψ_{k+1}⟩` modulo 2π,
/// which is gauge invariant (see [`WilsonLoop::principal_phase`]).
pub fn wilson_loop_phase(
    trajectory: &LoopTrajectory,
    source: &impl EigenstateSource,
    band: Band,
) -> Result<BerryPhaseResult> {
    let wl = wilson_loop(trajectory, source, band)?;
    let idx = source.block_index();
    Ok(BerryPhaseResult {
        n: idx.n,
        l: idx.l,
        band,
        winding: (band.phase_sign() * wl.phase / PI).round() as i64,
        phase: wl.phase,
        method: PhaseMethod::WilsonLoop,
    })
}

/// Raw Wilson-loop data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WilsonLoop {
    /// `−Σ arg` of the links.
    pub phase: f64,
    /// `∏` of the links.
    pub product: Complex64,
    /// Smallest `|⟨ψ_k|ψ_{k+1}⟩|`.
    pub min_overlap: f64,
}

impl WilsonLoop {
    /// `−arg ∏`, in `(−π, π]`.
    pub fn principal_phase(&self) -> f64 {
        let p = -self.product.arg();
        if p <= -PI {
            p + TAU
        } else {
            p
        }
    }
}

pub fn wilson_loop(trajectory: &LoopTrajectory, source: &impl EigenstateSource, band: Band) -> Result<WilsonLoop> {
    if !trajectory.is_closed() {
        return Err(Error::InvalidArgument("loop is not closed".into()));
    }
    let states = trajectory.points.iter().map(|&p| source.state(p, band)).collect::<Result<Vec<_>>>()?;
    let mut phase = 0.0;
    let mut product = Complex64::new(1.0, 0.0);
    let mut min_overlap = f64::INFINITY;
    for (k, pair) in states.windows(2).enumerate() {
        let link = pair[0][0].conj() * pair[1][0] + pair[0][1].conj() * pair[1][1];
        let size = link.norm();
        if size < MIN_LINK_OVERLAP {
            return Err(Error::InsufficientResolution(format!(
                "overlap {size:.3e} between loop points {k} and {}",
                k + 1
            )));
        }
        min_overlap = min_overlap.min(size);
        phase -= link.arg();
        product *= link / size;
    }
    Ok(WilsonLoop { phase, product, min_overlap })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup() -> PairSetup {
        PairSetup::new(BlockIndex::new(2, 0), 1.0, 1.0, Approximation::Gaa).unwrap()
    }

    fn rect(g: (f64, f64), e: (f64, f64)) -> LoopTrajectory {
        LoopTrajectory::rectangle(g, e, 2000, Orientation::Counterclockwise).unwrap()
    }

    #[test]
    fn rectangle_is_closed_and_oriented() {
        let r = rect((0.2, 0.5), (-0.1, 0.1));
        assert!(r.is_closed());
        assert!(r.signed_area() > 0.0);
        assert!((r.signed_area() - 0.06).abs() < 1e-12);
        assert!(r.reversed().signed_area() < 0.0);
        assert_eq!(r.encloses((0.3, 0.0)), 1);
        assert_eq!(r.reversed().encloses((0.3, 0.0)), -1);
        assert_eq!(r.encloses((0.6, 0.0)), 0);
        assert!(LoopTrajectory::rectangle((0.5, 0.2), (0.0, 1.0), 100, Orientation::Clockwise).is_err());
    }

    #[test]
    fn complexified_block_properties() {
        let p = ModelParams::new(1.0, 1.0, 0.4, 0.07).unwrap();
        let idx = BlockIndex::new(2, 0);
        let h = complexified_block(&p, idx, Approximation::Gaa);
        assert_eq!(h[1][0], h[0][1].conj());
        assert_eq!(h[0][0], h[1][1]);
        // eigenvalues h11 ± |h12| match the real block
        let pair = gaa::eigenpair(&p, idx, Approximation::Gaa);
        let r = h[0][1].norm();
        assert!((h[0][0].re + r - pair.e_plus).abs() < 1e-12);
        assert!((h[0][0].re - r - pair.e_minus).abs() < 1e-12);

        let ci = ModelParams::new(1.0, 1.0, 0.3323281463906075, 0.0).unwrap();
        let h = complexified_block(&ci, idx, Approximation::Gaa);
        assert!(h[0][1].norm() < 1e-9);
    }

    #[test]
    fn theta_examples() {
        let s = PairSetup::new(BlockIndex::new(0, 1), 0.0, 1.0, Approximation::Aa).unwrap();
        assert_eq!(theta_field((0.3, 1.2), &s).unwrap(), 0.0);
        let s = PairSetup::new(BlockIndex::new(0, 1), 0.5, 1.0, Approximation::Aa).unwrap();
        // Ω < 0 for odd l at g > 0
        assert!((theta_field((0.3, 1.0), &s).unwrap() + PI / 2.0).abs() < 1e-15);
        assert!(matches!(theta_field((0.0, 1.0), &s), Err(Error::Degenerate { .. })));
    }

    #[test]
    fn small_circle_sweeps_full_turn() {
        let s = setup();
        let g0 = 0.3323281463906075;
        let r = 1e-3;
        let mut total = 0.0;
        let mut prev = theta_field((g0 + r, 0.0), &s).unwrap();
        for k in 1..=720 {
            let a = TAU * k as f64 / 720.0;
            let t = theta_field((g0 + r * a.cos(), r * a.sin()), &s).unwrap();
            total += wrap_angle(t - prev);
            prev = t;
        }
        assert!((total.abs() - TAU).abs() < 1e-9, "{total}");
    }

    #[test]
    fn four_reference_loops() {
        let s = setup();
        let cases = [
            ((0.2, 0.5), (-0.1, 0.1), 1.0),
            ((0.8, 1.0), (-0.1, 0.1), -1.0),
            ((0.55, 0.7), (-0.1, 0.1), 0.0),
            ((0.25, 1.1), (-0.15, 0.15), 0.0),
        ];
        for (g, e, expected) in cases {
            let lp = rect(g, e);
            let analytic = berry_phase(&lp, &s, Band::Minus).unwrap();
            assert_eq!(analytic.phase_over_pi(), expected, "{g:?}");
            let plus = berry_phase(&lp, &s, Band::Plus).unwrap();
            assert_eq!(plus.phase, -analytic.phase);
            let wilson = wilson_loop_phase(&lp, &GaugeFixedStates(s), Band::Minus).unwrap();
            assert!((wilson.phase / PI - expected).abs() < 1e-3, "{g:?}: {}", wilson.phase);
        }
    }

    #[test]
    fn contractible_loop_has_zero_winding() {
        let lp = rect((0.4, 0.8), (0.05, 0.3));
        assert_eq!(winding_number(&lp, &setup()).unwrap(), 0);
    }

    #[test]
    fn reversal_negates_phase() {
        let lp = rect((0.2, 0.5), (-0.1, 0.1));
        let s = setup();
        let fwd = wilson_loop_phase(&lp, &GaugeFixedStates(s), Band::Plus).unwrap();
        let back = wilson_loop_phase(&lp.reversed(), &GaugeFixedStates(s), Band::Plus).unwrap();
        assert!((fwd.phase + back.phase).abs() < 1e-9);
        let minus = wilson_loop_phase(&lp, &GaugeFixedStates(s), Band::Minus).unwrap();
        assert!((fwd.phase + minus.phase).abs() < 1e-9);
    }

    #[test]
    fn gauge_invariance_of_product() {
        let s = setup();
        for (g, e) in [((0.2, 0.5), (-0.1, 0.1)), ((0.55, 0.7), (-0.1, 0.1))] {
            let lp = rect(g, e);
            for band in [Band::Plus, Band::Minus] {
                let fixed = wilson_loop(&lp, &GaugeFixedStates(s), band).unwrap();
                let numeric = wilson_loop(&lp, &DiagonalizedStates(s), band).unwrap();
                let diff = wrap_angle(fixed.principal_phase() - numeric.principal_phase());
                assert!(diff.abs() < 1e-9, "{diff}");
                assert!(wrap_angle(fixed.phase - fixed.principal_phase()).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn proximity_guard() {
        let s = setup();
        let g0 = 0.3323281463906075;
        let lp = LoopTrajectory::rectangle((g0, 0.5), (-0.1, 0.1), 400, Orientation::Counterclockwise).unwrap();
        match winding_number(&lp, &s) {
            Err(Error::TooCloseToIntersection { g, .. }) => assert!((g - g0).abs() < 1e-12),
            other => panic!("expected proximity error, got {other:?}"),
        }
    }

    #[test]
    fn coarse_loop_is_refined() {
        let s = setup();
        let lp = LoopTrajectory::rectangle((0.3, 0.36), (-1e-4, 1e-4), 4, Orientation::Counterclockwise).unwrap();
        assert_eq!(winding_number(&lp, &s).unwrap().abs(), 1);
        // the Wilson loop has no refinement and must refuse
        assert!(matches!(
            wilson_loop_phase(&lp, &GaugeFixedStates(s), Band::Plus),
            Err(Error::InsufficientResolution(_))
        ));
    }

    #[test]
    fn adjacent_intersections_alternate() {
        let s = setup();
        let a = berry_phase(&rect((0.2, 0.5), (-0.1, 0.1)), &s, Band::Plus).unwrap();
        let b = berry_phase(&rect((0.8, 1.0), (-0.1, 0.1)), &s, Band::Plus).unwrap();
        assert_eq!(a.winding, -b.winding);
        assert_eq!(a.winding.abs(), 1);
    }

    #[test]
    fn hermitian_eigenvector_residual() {
        let h = [
            [Complex64::new(0.3, 0.0), Complex64::new(0.2, -0.7)],
            [Complex64::new(0.2, 0.7), Complex64::new(-0.4, 0.0)],
        ];
        for band in [Band::Plus, Band::Minus] {
            let v = hermitian2_eigenvector(h, band).unwrap();
            let hv = [h[0][0] * v[0] + h[0][1] * v[1], h[1][0] * v[0] + h[1][1] * v[1]];
            let lambda = (v[0].conj() * hv[0] + v[1].conj() * hv[1]).re;
            assert!((hv[0] - v[0] * lambda).norm() < 1e-14 && (hv[1] - v[1] * lambda).norm() < 1e-14);
        }
    }
}
