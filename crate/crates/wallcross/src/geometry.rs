//! Three-component C*-wall-crossing geometries built as toric varieties.
//!
//! Two families are supported:
//! - blowup master spaces W = Bl_{Z x 0}(X x P1) for a smooth invariant
//!   center Z of codimension >= 2, and
//! - flip local models, where W is the projective master space of the
//!   two-torus action on V+ + V- + O over a toric base S.
//!
//! The fixed locus has three components F+ (highest), F0 (wall), F-
//! (lowest), and the two GIT quotients are X+- = P(N_{F+-/W}), realized as
//! the fixed divisors themselves. All component rings, normal data, curve
//! lattices and dual cones are extracted from the single fan of W.
//!
//! Orientation convention recorded in geometry dumps: N_{P/X} is the summand
//! dual normalized so that the exceptional square integrates to -1 on the
//! first blowup example (integral of E^2 over Bl_pt P2 equals -1).

use crate::fan::{self, Fan, FanError};
use crate::linalg::{self, rat, Mat, Rat};
use crate::ring::{CohRing, El, OrbitRestriction, RingError, ToricMorphism};
use num::{One, Signed, Zero};
use serde::Serialize;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("blowup center must have codimension at least 2")]
    CodimensionOne,
    #[error("local model requires 1 <= rank(V+) <= rank(V-)")]
    BadRanks,
    #[error("degree data does not match the base fan")]
    BadDegrees,
    #[error("wall weights are not +1/-1: {0:?}")]
    BadWeights(Vec<Rat>),
    #[error("curve-class system is inconsistent (geometry bug)")]
    InconsistentCurveSystem,
    #[error("operation requires c_{{F0}} != 0 (flop geometry)")]
    FlopNotApplicable,
    #[error("expected the lattice map to be integral")]
    NonIntegralMap,
}

/// Equivariant curve class beta + lam * lambda^*, with beta recorded by its
/// intersection numbers against every ray divisor of W.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct EqCurve {
    pub beta: Vec<Rat>,
    pub lam: Rat,
}

impl EqCurve {
    pub fn zero(n: usize) -> Self {
        EqCurve {
            beta: vec![Rat::zero(); n],
            lam: Rat::zero(),
        }
    }

    pub fn curve(beta: Vec<Rat>) -> Self {
        EqCurve {
            beta,
            lam: Rat::zero(),
        }
    }

    pub fn add(&self, other: &EqCurve) -> EqCurve {
        EqCurve {
            beta: self
                .beta
                .iter()
                .zip(&other.beta)
                .map(|(a, b)| a + b)
                .collect(),
            lam: &self.lam + &other.lam,
        }
    }

    pub fn scale(&self, c: &Rat) -> EqCurve {
        EqCurve {
            beta: self.beta.iter().map(|x| x * c).collect(),
            lam: &self.lam * c,
        }
    }

    pub fn sub(&self, other: &EqCurve) -> EqCurve {
        self.add(&other.scale(&-Rat::one()))
    }

    pub fn is_zero(&self) -> bool {
        self.lam.is_zero() && self.beta.iter().all(|x| x.is_zero())
    }
}

/// Split equivariant normal data at a fixed component: line-summand degree
/// classes for the weight +1 and weight -1 parts, plus the recorded weights
/// so that validation can catch hand-edited data.
#[derive(Clone)]
pub struct FixedComponent {
    pub ring: Arc<CohRing>,
    pub plus_degrees: Vec<El>,
    pub minus_degrees: Vec<El>,
    pub weights_plus: Vec<i64>,
    pub weights_minus: Vec<i64>,
}

impl FixedComponent {
    pub fn r_plus(&self) -> i64 {
        self.plus_degrees.len() as i64
    }
    pub fn r_minus(&self) -> i64 {
        self.minus_degrees.len() as i64
    }
    pub fn r_total(&self) -> i64 {
        self.r_plus() + self.r_minus()
    }
    pub fn c_f(&self) -> i64 {
        self.r_plus() - self.r_minus()
    }
    pub fn rho_f(&self) -> El {
        let mut rho = El::zero(&self.ring);
        for d in self.plus_degrees.iter().chain(&self.minus_degrees) {
            rho = rho.add(d);
        }
        rho
    }
}

/// P(N_{F0,+-}) inside X_{+-}, with its bundle structure over F0.
pub struct ExceptionalLocus {
    pub ring: Arc<CohRing>,
    /// restriction data for the inclusion into the quotient
    pub incl: OrbitRestriction,
    /// hyperplane class c1(O(1)) of the projectivized bundle
    pub h: El,
    /// lattice map of the projection to the wall
    pub psi: ToricMorphism,
    /// fiber line class as intersection numbers with the locus' ray divisors
    /// (zero vector when the bundle has rank one)
    pub fiber_curve: Vec<Rat>,
    /// cone of the locus inside the quotient fan
    pub cone: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub enum GeometryKind {
    Blowup {
        ambient_rays: Vec<Vec<i64>>,
        center: Vec<usize>,
    },
    LocalModel {
        base_rays: Vec<Vec<i64>>,
        v_plus: Vec<Vec<i64>>,
        v_minus: Vec<Vec<i64>>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Plus,
    Minus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KappaTarget {
    XPlus,
    XMinus,
    F0,
}

pub struct ThreeComponentGeometry {
    pub kind: GeometryKind,
    pub w_fan: Fan,
    /// generators of NE_N(W) as ray-intersection vectors
    pub w_mori: Vec<Vec<Rat>>,
    /// divisor functional pairing >= 1 with every Mori generator
    pub omega: Vec<Rat>,
    pub f_plus: FixedComponent,
    pub f_zero: FixedComponent,
    pub f_minus: FixedComponent,
    /// inclusions of the three fixed components into W
    pub incl_plus: OrbitRestriction,
    pub incl_zero: OrbitRestriction,
    pub incl_minus: OrbitRestriction,
    pub p_plus: ExceptionalLocus,
    pub p_minus: ExceptionalLocus,
    /// common blowup of the two quotients; pi_- is the refinement identity
    pub x_tilde: Arc<CohRing>,
    /// c1(N_{F+-/W}) on X+-
    pub rho_plus: El,
    pub rho_minus: El,
    /// curve classes of the invariant spheres F0 -> F- and F+ -> F0
    pub a: Vec<Rat>,
    pub b: Vec<Rat>,
    /// fiber class of P(N_{F0,-}) pushed into X- (the class also called a)
    pub a_on_xminus: Vec<Rat>,
    /// fiber class of P(N_{F0,+}) pushed into X+ (empty when r+ = 1)
    pub b_on_xplus: Option<Vec<Rat>>,
    pub c_f0: i64,
    pub zeta_ray: usize,
    pub inf_ray: usize,
    pub f0_cone: Vec<usize>,
}

impl ThreeComponentGeometry {
    pub fn x_plus(&self) -> &Arc<CohRing> {
        &self.f_plus.ring
    }
    pub fn x_minus(&self) -> &Arc<CohRing> {
        &self.f_minus.ring
    }
    pub fn f0(&self) -> &Arc<CohRing> {
        &self.f_zero.ring
    }
    pub fn is_flop(&self) -> bool {
        self.c_f0 == 0
    }
    /// hyperplane class of X- = P(N_{F-/W})
    pub fn p_minus_class(&self) -> El {
        self.rho_minus.neg()
    }
    pub fn p_plus_class(&self) -> El {
        self.rho_plus.neg()
    }

    pub fn a_class(&self) -> EqCurve {
        EqCurve::curve(self.a.clone())
    }
    pub fn b_class(&self) -> EqCurve {
        EqCurve::curve(self.b.clone())
    }
    pub fn lambda_star(&self) -> EqCurve {
        EqCurve {
            beta: vec![Rat::zero(); self.w_fan.num_rays()],
            lam: Rat::one(),
        }
    }
    /// sigma_{F0}(1) = lambda^* - a, the class whose Novikov variable is S_{F0}
    pub fn sigma_f0(&self) -> EqCurve {
        self.lambda_star().sub(&self.a_class())
    }
    /// sigma_{F+}(1) = lambda^* - a - b
    pub fn sigma_fplus(&self) -> EqCurve {
        self.sigma_f0().sub(&self.b_class())
    }

    /// 2 (mu, c1^{C*}(W)): the grading of the equivariant Novikov monomial.
    pub fn equivariant_novikov_degree(&self, mu: &EqCurve) -> Rat {
        let beta_part: Rat = mu.beta.iter().fold(Rat::zero(), |s, x| s + x);
        rat(2) * (beta_part + &mu.lam)
    }

    /// Exact rational feasibility of mu against the dual ample cone of the
    /// chosen quotient.
    pub fn dual_cone_membership(&self, mu: &EqCurve, side: Side) -> bool {
        let n = self.w_fan.num_rays();
        let lam_star = self.lambda_star();
        let a = self.a_class();
        let b = self.b_class();
        let extra: Vec<EqCurve> = match side {
            Side::Minus => vec![a.sub(&lam_star), lam_star.clone()],
            Side::Plus => vec![a.add(&b).sub(&lam_star), lam_star.sub(&a)],
        };
        let mut cols: Vec<Vec<Rat>> = Vec::new();
        for g in &self.w_mori {
            let mut v = g.clone();
            v.push(Rat::zero());
            cols.push(v);
        }
        for e in &extra {
            let mut v = e.beta.clone();
            v.push(e.lam.clone());
            cols.push(v);
        }
        let mat = Mat::from_rows(fan::transpose(&cols));
        let mut target = mu.beta.clone();
        target.push(mu.lam.clone());
        debug_assert_eq!(mat.rows, n + 1);
        linalg::in_cone(&mat, &target)
    }

    /// Dual Kirwan map on curve classes. For the quotients the input is a
    /// curve on X+- (plus an optional multiple of the formal fiber class when
    /// the exceptional bundle has rank one); for F0 it is a curve on the wall.
    pub fn kappa_dual(
        &self,
        class: &QuotientCurve,
        target: KappaTarget,
    ) -> Result<EqCurve, GeometryError> {
        match target {
            KappaTarget::XMinus => {
                let pushed = self.incl_minus.push_curve(&class.beta);
                let pair = self.f_minus.ring.curve_pair(&class.beta, &self.rho_minus)
                    + &class.fiber * self.pairing_a_rho_minus();
                let mut out = EqCurve::curve(pushed);
                // fiber part: class.fiber * a pushed from X-
                for (i, x) in self.a.iter().enumerate() {
                    out.beta[i] = &out.beta[i] + &(&class.fiber * x);
                }
                Ok(out.sub(&self.lambda_star().scale(&pair)))
            }
            KappaTarget::XPlus => {
                let pushed = self.incl_plus.push_curve(&class.beta);
                let mut out = EqCurve::curve(pushed);
                let mut pair = self.f_plus.ring.curve_pair(&class.beta, &self.rho_plus);
                if !class.fiber.is_zero() {
                    match &self.b_on_xplus {
                        Some(bv) => {
                            let extra = self.incl_plus.push_curve(
                                &bv.iter().map(|x| x * &class.fiber).collect::<Vec<_>>(),
                            );
                            for (i, x) in extra.iter().enumerate() {
                                out.beta[i] = &out.beta[i] + x;
                            }
                            pair += &class.fiber
                                * self.f_plus.ring.curve_pair(bv, &self.rho_plus);
                        }
                        None => {
                            // rank-one bundle: the fiber class is formal with
                            // kappa^*(b) = lambda^* - a by the pairing rule
                            for (i, x) in self.b.iter().enumerate() {
                                out.beta[i] = &out.beta[i] + &(&class.fiber * x);
                            }
                            pair += class.fiber.clone();
                        }
                    }
                }
                Ok(out.add(&self.sigma_fplus().scale(&pair)))
            }
            KappaTarget::F0 => {
                if self.c_f0 == 0 {
                    return Err(GeometryError::FlopNotApplicable);
                }
                let pushed = self.incl_zero.push_curve(&class.beta);
                let rho0 = self.f_zero.rho_f();
                let pair = self.f_zero.ring.curve_pair(&class.beta, &rho0);
                let frac = pair / rat(self.c_f0);
                Ok(EqCurve::curve(pushed).sub(&self.sigma_f0().scale(&frac)))
            }
        }
    }

    fn pairing_a_rho_minus(&self) -> Rat {
        self.f_minus
            .ring
            .curve_pair(&self.a_on_xminus, &self.rho_minus)
    }

    /// The unique curve on X- (with a rational multiple of a) solving
    /// kappa^*_{X-}(out) = kappa^*_{X+}(input).
    pub fn phi_curve(&self, class: &QuotientCurve) -> Result<QuotientCurve, GeometryError> {
        let rhs = self.kappa_dual(class, KappaTarget::XPlus)?;
        self.solve_kappa_minus(&rhs)
    }

    /// The unique curve on X- with fractional a-part solving
    /// kappa^*_{X-}(out) = kappa^*_{F0}(input).
    pub fn phi0_curve(&self, class: &QuotientCurve) -> Result<QuotientCurve, GeometryError> {
        let rhs = self.kappa_dual(class, KappaTarget::F0)?;
        self.solve_kappa_minus(&rhs)
    }

    fn solve_kappa_minus(&self, rhs: &EqCurve) -> Result<QuotientCurve, GeometryError> {
        // unknowns: coefficients over a basis of N1(X-)_Q
        let xm = &self.f_minus.ring;
        let nr = xm.fan.num_rays();
        let ray_mat = Mat::from_rows(
            (0..xm.fan.rank)
                .map(|i| (0..nr).map(|r| rat(xm.fan.rays[r][i])).collect())
                .collect(),
        );
        let basis = linalg::kernel(&ray_mat);
        let nw = self.w_fan.num_rays();
        let mut cols: Vec<Vec<Rat>> = Vec::new();
        for k in &basis {
            let pushed = self.incl_minus.push_curve(k);
            let pair = xm.curve_pair(k, &self.rho_minus);
            let mut col = pushed;
            col.push(-pair);
            cols.push(col);
        }
        let mat = Mat::from_rows(fan::transpose(&cols));
        let mut target = rhs.beta.clone();
        target.push(rhs.lam.clone());
        debug_assert_eq!(mat.rows, nw + 1);
        let sol =
            linalg::solve(&mat, &target).ok_or(GeometryError::InconsistentCurveSystem)?;
        // verify (solve() tolerates underdetermined systems)
        let chk = mat.mul_vec(&sol);
        if chk != target {
            return Err(GeometryError::InconsistentCurveSystem);
        }
        let mut beta = vec![Rat::zero(); nr];
        for (k, c) in basis.iter().zip(&sol) {
            for (i, x) in k.iter().enumerate() {
                beta[i] = &beta[i] + &(x * c);
            }
        }
        Ok(QuotientCurve {
            beta,
            fiber: Rat::zero(),
        })
    }

    /// Per-condition report of the simple-wall requirements.
    pub fn validate_simple_wall(&self) -> WallReport {
        let mut checks = Vec::new();
        let w_ok = self
            .f_zero
            .weights_plus
            .iter()
            .all(|&w| w == 1)
            && self.f_zero.weights_minus.iter().all(|&w| w == -1)
            && self.f_plus.weights_minus.iter().all(|&w| w == -1)
            && self.f_minus.weights_plus.iter().all(|&w| w == 1);
        checks.push(WallCheck {
            name: "weights_pm1".into(),
            passed: w_ok,
            detail: format!(
                "F0 weights: {:?} / {:?}",
                self.f_zero.weights_plus, self.f_zero.weights_minus
            ),
        });
        let extremes_ok =
            self.f_plus.plus_degrees.is_empty() && self.f_minus.minus_degrees.is_empty();
        checks.push(WallCheck {
            name: "highest_lowest_structure".into(),
            passed: extremes_ok,
            detail: "r_{F+,+} = r_{F-,-} = 0".into(),
        });
        let quotients_ok = self.f_plus.ring.fan.validate().is_ok()
            && self.f_minus.ring.fan.validate().is_ok();
        checks.push(WallCheck {
            name: "smooth_projective_quotients".into(),
            passed: quotients_ok,
            detail: "fans of X+- are smooth and complete".into(),
        });
        let connected = !self.f_zero.ring.fan.cones.is_empty();
        checks.push(WallCheck {
            name: "connected_wall".into(),
            passed: connected,
            detail: format!("F0 has {} maximal cones", self.f_zero.ring.fan.cones.len()),
        });
        // dimension identity, degree by degree
        let dim_ok = self.dimension_identity_holds();
        checks.push(WallCheck {
            name: "dimension_identity".into(),
            passed: dim_ok,
            detail: format!(
                "dim H*(X-) = {} vs {} + |c|*{}",
                self.f_minus.ring.total_dim(),
                self.f_plus.ring.total_dim(),
                self.f_zero.ring.total_dim()
            ),
        });
        let ne_ok = self.curve_in_mori_cone(&self.a) && self.curve_in_mori_cone(&self.b);
        checks.push(WallCheck {
            name: "a_b_effective".into(),
            passed: ne_ok,
            detail: "a and b lie in NE(W)".into(),
        });
        WallReport { checks }
    }

    pub fn dimension_identity_holds(&self) -> bool {
        let c_abs = (-self.c_f0) as usize;
        let r_plus = self.f_zero.r_plus() as usize;
        let bm = self.f_minus.ring.betti();
        let bp = self.f_plus.ring.betti();
        let b0 = self.f_zero.ring.betti();
        let dim_m = self.f_minus.ring.dim;
        for k in 0..=dim_m {
            let lhs = bm[k];
            let mut rhs = if k < bp.len() { bp[k] } else { 0 };
            for i in 0..c_abs {
                let shift = i + r_plus;
                if k >= shift && k - shift < b0.len() {
                    rhs += b0[k - shift];
                }
            }
            if lhs != rhs {
                return false;
            }
        }
        true
    }

    fn curve_in_mori_cone(&self, curve: &[Rat]) -> bool {
        let cols = fan::transpose(&self.w_mori);
        if cols.is_empty() {
            return curve.iter().all(|x| x.is_zero());
        }
        linalg::in_cone(&Mat::from_rows(cols), curve)
    }
}

/// Curve class on a quotient or on the wall: intersection numbers against the
/// ray divisors plus an optional multiple of the distinguished fiber class
/// (needed when the exceptional bundle has rank one and the fiber class is
/// not a curve on the quotient).
#[derive(Clone, Debug, PartialEq)]
pub struct QuotientCurve {
    pub beta: Vec<Rat>,
    pub fiber: Rat,
}

impl QuotientCurve {
    pub fn new(beta: Vec<Rat>) -> Self {
        QuotientCurve {
            beta,
            fiber: Rat::zero(),
        }
    }
    pub fn fiber_multiple(n: usize, c: Rat) -> Self {
        QuotientCurve {
            beta: vec![Rat::zero(); n],
            fiber: c,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct WallCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Serialize)]
pub struct WallReport {
    pub checks: Vec<WallCheck>,
}

impl WallReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// W = Bl_{Z x 0}(X x P1) for an invariant center Z = V(center) of
/// codimension >= 2.
pub fn build_blowup_geometry(
    x_fan: &Fan,
    center: &[usize],
) -> Result<ThreeComponentGeometry, GeometryError> {
    x_fan.validate()?;
    if center.len() < 2 {
        return Err(GeometryError::CodimensionOne);
    }
    if !x_fan.is_cone(center) {
        return Err(GeometryError::Fan(FanError::NoSuchCone(center.to_vec())));
    }
    let p1 = Fan::projective_space(1)?;
    let w0 = x_fan.product(&p1);
    let q0 = x_fan.num_rays();
    let q_inf = q0 + 1;
    let mut bl_center = center.to_vec();
    bl_center.push(q0);
    let (w, v_e) = w0.star_subdivision(&bl_center)?;
    let mut f0_cone = center.to_vec();
    f0_cone.push(v_e);
    f0_cone.sort_unstable();
    let kind = GeometryKind::Blowup {
        ambient_rays: x_fan.rays.clone(),
        center: center.to_vec(),
    };
    assemble(kind, w, q0, q_inf, f0_cone)
}

/// Ray bookkeeping of the local-model master fan.
struct MasterRays {
    s_plus: usize,
    s_minus: usize,
    y_ids: Vec<usize>,
    w_ids: Vec<usize>,
}

/// The master space of the local model: the projectivized two-torus GIT
/// datum on V+ + V- + O over S, written directly as a fan.
fn local_model_master_fan(
    base: &Fan,
    v_plus: &[Vec<i64>],
    v_minus: &[Vec<i64>],
) -> Result<(Fan, MasterRays), GeometryError> {
    let s = base.rank;
    let rp = v_plus.len();
    let rm = v_minus.len();
    let rank = s + rp + rm;
    // fiber coordinates: phi_1..phi_rp, omega_1..omega_{rm-1}, sigma
    let phi = |i: usize| s + i;
    let omega = |j: usize| s + rp + j;
    let sig = rank - 1;

    let mut rays: Vec<Vec<i64>> = Vec::new();
    // lifted base rays
    for (rho, v) in base.rays.iter().enumerate() {
        let mut lifted = vec![0i64; rank];
        lifted[..s].clone_from_slice(v);
        let a_last = v_minus[rm - 1][rho];
        for i in 0..rp {
            lifted[phi(i)] = -v_plus[i][rho] - a_last;
        }
        for j in 0..rm - 1 {
            lifted[omega(j)] = a_last - v_minus[j][rho];
        }
        lifted[sig] = a_last;
        rays.push(lifted);
    }
    let base_count = rays.len();
    // y_i = phi_i
    let mut y_ids = Vec::new();
    for i in 0..rp {
        let mut v = vec![0i64; rank];
        v[phi(i)] = 1;
        y_ids.push(rays.len());
        rays.push(v);
    }
    // w_j = omega_j for j < rm, and w_rm = sum(phi) - sigma - sum(omega)
    let mut w_ids = Vec::new();
    for j in 0..rm - 1 {
        let mut v = vec![0i64; rank];
        v[omega(j)] = 1;
        w_ids.push(rays.len());
        rays.push(v);
    }
    {
        let mut v = vec![0i64; rank];
        for i in 0..rp {
            v[phi(i)] = 1;
        }
        for j in 0..rm - 1 {
            v[omega(j)] = -1;
        }
        v[sig] = -1;
        w_ids.push(rays.len());
        rays.push(v);
    }
    // u = sigma - sum(phi)
    let u_id = rays.len();
    {
        let mut v = vec![0i64; rank];
        for i in 0..rp {
            v[phi(i)] = -1;
        }
        v[sig] = 1;
        rays.push(v);
    }
    // s+ = sigma, s- = -sigma
    let s_plus = rays.len();
    {
        let mut v = vec![0i64; rank];
        v[sig] = 1;
        rays.push(v);
    }
    let s_minus = rays.len();
    {
        let mut v = vec![0i64; rank];
        v[sig] = -1;
        rays.push(v);
    }

    let base_ids: Vec<usize> = (0..base_count).collect();
    let mut cones = Vec::new();
    let mut yu: Vec<usize> = y_ids.clone();
    yu.push(u_id);
    let mut wu: Vec<usize> = w_ids.clone();
    wu.push(u_id);
    for bc in &base.cones {
        let lift: Vec<usize> = bc.iter().map(|&i| base_ids[i]).collect();
        // X- side: all but one of {y, u}, all but one of {w}, plus s+
        for skip_yu in &yu {
            for skip_w in &w_ids {
                let mut c = lift.clone();
                c.extend(yu.iter().filter(|&&r| r != *skip_yu));
                c.extend(w_ids.iter().filter(|&&r| r != *skip_w));
                c.push(s_plus);
                cones.push(c);
            }
        }
        // X+ side: all but one of {y}, all but one of {w, u}, plus s-
        for skip_y in &y_ids {
            for skip_wu in &wu {
                let mut c = lift.clone();
                c.extend(y_ids.iter().filter(|&&r| r != *skip_y));
                c.extend(wu.iter().filter(|&&r| r != *skip_wu));
                c.push(s_minus);
                cones.push(c);
            }
        }
        // equatorial cone: all y and all w
        let mut c = lift.clone();
        c.extend(y_ids.iter());
        c.extend(w_ids.iter());
        cones.push(c);
    }
    let fan = Fan::new(rank, rays, cones);
    Ok((
        fan,
        MasterRays {
            s_plus,
            s_minus,
            y_ids,
            w_ids,
        },
    ))
}

/// Local model of a flip: S toric, split bundles V+- of ranks r+ <= r-.
pub fn build_local_model_geometry(
    base: &Fan,
    v_plus: &[Vec<i64>],
    v_minus: &[Vec<i64>],
) -> Result<ThreeComponentGeometry, GeometryError> {
    base.validate()?;
    let rp = v_plus.len();
    let rm = v_minus.len();
    if rp == 0 || rm == 0 || rp > rm {
        return Err(GeometryError::BadRanks);
    }
    for d in v_plus.iter().chain(v_minus.iter()) {
        if d.len() != base.num_rays() {
            return Err(GeometryError::BadDegrees);
        }
    }
    let (w, master) = local_model_master_fan(base, v_plus, v_minus)?;
    let mut f0_cone: Vec<usize> = master.y_ids.iter().chain(&master.w_ids).cloned().collect();
    f0_cone.sort_unstable();
    let kind = GeometryKind::LocalModel {
        base_rays: base.rays.clone(),
        v_plus: v_plus.to_vec(),
        v_minus: v_minus.to_vec(),
    };
    assemble(kind, w, master.s_plus, master.s_minus, f0_cone)
}

/// Lattice map induced on quotients: L with L . proj_src = proj_dst. Requires
/// ker(proj_src) inside ker(proj_dst).
fn induced_quotient_map(proj_src: &Mat, proj_dst: &Mat) -> Result<Mat, GeometryError> {
    let n = proj_src.cols;
    assert_eq!(proj_dst.cols, n);
    let mut l = Mat::zeros(proj_dst.rows, proj_src.rows);
    for i in 0..proj_src.rows {
        let mut e = vec![Rat::zero(); proj_src.rows];
        e[i] = Rat::one();
        let wvec =
            linalg::solve(proj_src, &e).ok_or(GeometryError::InconsistentCurveSystem)?;
        let img = proj_dst.mul_vec(&wvec);
        for (r, x) in img.into_iter().enumerate() {
            if !x.is_integer() {
                return Err(GeometryError::NonIntegralMap);
            }
            l[(r, i)] = x;
        }
    }
    // well-definedness: L . proj_src = proj_dst
    for j in 0..n {
        for r in 0..proj_dst.rows {
            let mut s = Rat::zero();
            for i in 0..proj_src.rows {
                s += &l[(r, i)] * &proj_src[(i, j)];
            }
            if s != proj_dst[(r, j)] {
                return Err(GeometryError::InconsistentCurveSystem);
            }
        }
    }
    Ok(l)
}

fn compose(a: &Mat, b: &Mat) -> Mat {
    // a: p x q, b: q x r -> p x r
    assert_eq!(a.cols, b.rows);
    let mut m = Mat::zeros(a.rows, b.cols);
    for i in 0..a.rows {
        for j in 0..b.cols {
            let mut s = Rat::zero();
            for k in 0..a.cols {
                s += &a[(i, k)] * &b[(k, j)];
            }
            m[(i, j)] = s;
        }
    }
    m
}

fn wall_curve_for(fan: &Fan, wall: &[usize]) -> Result<Vec<Rat>, GeometryError> {
    let mut sorted = wall.to_vec();
    sorted.sort_unstable();
    let owners: Vec<usize> = fan
        .cones
        .iter()
        .enumerate()
        .filter(|(_, c)| sorted.iter().all(|r| c.contains(r)) && c.len() == sorted.len() + 1)
        .map(|(i, _)| i)
        .collect();
    if owners.len() != 2 {
        return Err(GeometryError::InconsistentCurveSystem);
    }
    let u1 = *fan.cones[owners[0]]
        .iter()
        .find(|r| !sorted.contains(r))
        .unwrap();
    let u2 = *fan.cones[owners[1]]
        .iter()
        .find(|r| !sorted.contains(r))
        .unwrap();
    let n = fan.rank;
    let m = Mat::from_rows(
        (0..n)
            .map(|i| sorted.iter().map(|&r| rat(fan.rays[r][i])).collect())
            .collect(),
    );
    let rhs: Vec<Rat> = (0..n)
        .map(|i| rat(-(fan.rays[u1][i] + fan.rays[u2][i])))
        .collect();
    let c = linalg::solve_unique(&m, &rhs).ok_or(GeometryError::InconsistentCurveSystem)?;
    let mut class = vec![Rat::zero(); fan.num_rays()];
    class[u1] = Rat::one();
    class[u2] = Rat::one();
    for (j, &r) in sorted.iter().enumerate() {
        class[r] = c[j].clone();
    }
    Ok(class)
}

fn assemble(
    kind: GeometryKind,
    w: Fan,
    zeta_ray: usize,
    inf_ray: usize,
    f0_cone: Vec<usize>,
) -> Result<ThreeComponentGeometry, GeometryError> {
    w.validate()?;
    debug_assert_eq!(
        w.rays[inf_ray],
        w.rays[zeta_ray].iter().map(|x| -x).collect::<Vec<_>>()
    );

    // common quotient lattice for both fixed divisors
    let proj_x = w.quotient_projection(&[zeta_ray])?;
    let x_minus_orbit = w.orbit_fan(&[zeta_ray], Some(proj_x.clone()))?;
    let x_plus_orbit = w.orbit_fan(&[inf_ray], Some(proj_x))?;
    let f0_orbit = w.orbit_fan(&f0_cone, None)?;
    let x_minus_proj = x_minus_orbit.projection.clone();
    let x_plus_proj = x_plus_orbit.projection.clone();
    let f0_proj = f0_orbit.projection.clone();

    let incl_minus = OrbitRestriction::new(&w, x_minus_orbit)?;
    let incl_plus = OrbitRestriction::new(&w, x_plus_orbit)?;
    let incl_zero = OrbitRestriction::new(&w, f0_orbit)?;

    let x_minus = Arc::new(CohRing::new(incl_minus.orbit.fan.clone())?);
    let x_plus = Arc::new(CohRing::new(incl_plus.orbit.fan.clone())?);
    let f0 = Arc::new(CohRing::new(incl_zero.orbit.fan.clone())?);

    // weight decomposition of the wall: zeta = sum c_r v_r over the F0 cone
    let n = w.rank;
    let m = Mat::from_rows(
        (0..n)
            .map(|i| f0_cone.iter().map(|&r| rat(w.rays[r][i])).collect())
            .collect(),
    );
    let zeta_vec: Vec<Rat> = w.rays[zeta_ray].iter().map(|&x| rat(x)).collect();
    let coeffs =
        linalg::solve_unique(&m, &zeta_vec).ok_or(GeometryError::InconsistentCurveSystem)?;
    if coeffs.iter().any(|c| c.abs() != Rat::one()) {
        return Err(GeometryError::BadWeights(coeffs));
    }
    let mut plus_rays = Vec::new();
    let mut minus_rays = Vec::new();
    for (i, c) in coeffs.iter().enumerate() {
        if c.is_positive() {
            plus_rays.push(f0_cone[i]);
        } else {
            minus_rays.push(f0_cone[i]);
        }
    }

    // normal data
    let rho_minus = x_minus.divisor_class(&incl_minus.ray_restrictions[zeta_ray]);
    let rho_plus = x_plus.divisor_class(&incl_plus.ray_restrictions[inf_ray]);
    let plus_degrees: Vec<El> = plus_rays
        .iter()
        .map(|&r| f0.divisor_class(&incl_zero.ray_restrictions[r]))
        .collect();
    let minus_degrees: Vec<El> = minus_rays
        .iter()
        .map(|&r| f0.divisor_class(&incl_zero.ray_restrictions[r]))
        .collect();

    let f_plus = FixedComponent {
        ring: x_plus.clone(),
        plus_degrees: vec![],
        minus_degrees: vec![rho_plus.clone()],
        weights_plus: vec![],
        weights_minus: vec![-1],
    };
    let f_minus = FixedComponent {
        ring: x_minus.clone(),
        plus_degrees: vec![rho_minus.clone()],
        minus_degrees: vec![],
        weights_plus: vec![1],
        weights_minus: vec![],
    };
    let f_zero = FixedComponent {
        ring: f0.clone(),
        plus_degrees,
        minus_degrees,
        weights_plus: vec![1; plus_rays.len()],
        weights_minus: vec![-1; minus_rays.len()],
    };
    let c_f0 = f_zero.c_f();

    // exceptional loci: P+- = V(of the opposite-sign rays) inside X+-
    let p_plus = build_locus(
        &incl_plus,
        &x_plus_proj,
        &f0,
        &f0_proj,
        &minus_rays,
        &plus_rays,
        &f_zero.plus_degrees,
    )?;
    let p_minus = build_locus(
        &incl_minus,
        &x_minus_proj,
        &f0,
        &f0_proj,
        &plus_rays,
        &minus_rays,
        &f_zero.minus_degrees,
    )?;

    // common blowup
    let x_tilde_fan = if p_minus.cone.len() >= 2 {
        incl_minus.orbit.fan.star_subdivision(&p_minus.cone)?.0
    } else {
        incl_minus.orbit.fan.clone()
    };
    // the same refinement must be reachable from the plus side
    if p_plus.cone.len() >= 2 {
        let from_plus = incl_plus.orbit.fan.star_subdivision(&p_plus.cone)?.0;
        let mut lhs: Vec<Vec<i64>> = x_tilde_fan.rays.clone();
        let mut rhs: Vec<Vec<i64>> = from_plus.rays.clone();
        lhs.sort();
        rhs.sort();
        if lhs != rhs {
            return Err(GeometryError::InconsistentCurveSystem);
        }
    }
    let x_tilde = Arc::new(CohRing::new(x_tilde_fan)?);

    // invariant curves a (F0 -> F-) and b (F+ -> F0)
    let sigma_max = w
        .cones
        .iter()
        .find(|c| f0_cone.iter().all(|r| c.contains(r)))
        .ok_or(GeometryError::InconsistentCurveSystem)?
        .clone();
    let tau_a: Vec<usize> = sigma_max
        .iter()
        .filter(|&&r| r != minus_rays[0])
        .cloned()
        .collect();
    let a = wall_curve_for(&w, &tau_a)?;
    let tau_b: Vec<usize> = sigma_max
        .iter()
        .filter(|&&r| r != plus_rays[0])
        .cloned()
        .collect();
    let b = wall_curve_for(&w, &tau_b)?;

    // fiber classes pushed into the quotients
    let a_on_xminus = p_minus.incl.push_curve(&p_minus.fiber_curve);
    let b_on_xplus = if f_zero.r_plus() >= 2 {
        Some(p_plus.incl.push_curve(&p_plus.fiber_curve))
    } else {
        None
    };

    // cross-check: the pushed fiber classes reproduce a and b in W
    if f_zero.r_minus() >= 2 {
        let via_fiber = incl_minus.push_curve(&a_on_xminus);
        if via_fiber != a {
            return Err(GeometryError::InconsistentCurveSystem);
        }
    }
    if let Some(bv) = &b_on_xplus {
        let via_fiber = incl_plus.push_curve(bv);
        if via_fiber != b {
            return Err(GeometryError::InconsistentCurveSystem);
        }
    }

    let w_mori = w.mori_generators();
    let omega_cols = fan::transpose(&w_mori);
    let omega = linalg::strictly_positive_functional(&Mat::from_rows(omega_cols))
        .ok_or(GeometryError::InconsistentCurveSystem)?;

    Ok(ThreeComponentGeometry {
        kind,
        w_fan: w,
        w_mori,
        omega,
        f_plus,
        f_zero,
        f_minus,
        incl_plus,
        incl_zero,
        incl_minus,
        p_plus,
        p_minus,
        x_tilde,
        rho_plus,
        rho_minus,
        a,
        b,
        a_on_xminus,
        b_on_xplus,
        c_f0,
        zeta_ray,
        inf_ray,
        f0_cone,
    })
}

#[allow(clippy::too_many_arguments)]
fn build_locus(
    incl_x: &OrbitRestriction,
    x_proj: &Mat,
    f0_ring: &Arc<CohRing>,
    f0_proj: &Mat,
    defining_rays_w: &[usize],
    fiber_rays_w: &[usize],
    fiber_degrees: &[El],
) -> Result<ExceptionalLocus, GeometryError> {
    // cone of the locus inside the quotient fan
    let mut cone: Vec<usize> = defining_rays_w
        .iter()
        .map(|&r| {
            incl_x.orbit.ray_image[r].ok_or(GeometryError::InconsistentCurveSystem)
        })
        .collect::<Result<_, _>>()?;
    cone.sort_unstable();
    let locus_orbit = incl_x.orbit.fan.orbit_fan(&cone, None)?;
    let locus_proj = locus_orbit.projection.clone();
    let incl = OrbitRestriction::new(&incl_x.orbit.fan, locus_orbit)?;
    let ring = Arc::new(CohRing::new(incl.orbit.fan.clone())?);

    // psi: locus -> F0 induced on quotient lattices of W
    let total_locus = compose(&locus_proj, x_proj);
    let lattice = induced_quotient_map(&total_locus, f0_proj)?;
    let psi = ToricMorphism::new(lattice);

    // hyperplane class: [fiber ray divisor] - psi^*(degree), uniform in the
    // chosen summand; rank-one bundles have no fiber ray.
    let rank = fiber_rays_w.len();
    let h = if rank >= 2 {
        let mut h_candidates = Vec::new();
        for (k, &fr) in fiber_rays_w.iter().enumerate() {
            let in_x = incl_x.orbit.ray_image[fr].ok_or(GeometryError::InconsistentCurveSystem)?;
            let restricted = ring.divisor_class(&incl.ray_restrictions[in_x]);
            let pulled = psi.pullback(&ring, f0_ring, &fiber_degrees[k])?;
            h_candidates.push(restricted.sub(&pulled));
        }
        for other in &h_candidates[1..] {
            if *other != h_candidates[0] {
                return Err(GeometryError::InconsistentCurveSystem);
            }
        }
        h_candidates.remove(0)
    } else {
        psi.pullback(&ring, f0_ring, &fiber_degrees[0])?.neg()
    };

    // fiber line class: pairs 1 with each fiber ray divisor
    let mut fiber_curve = vec![Rat::zero(); ring.fan.num_rays()];
    if rank >= 2 {
        for &fr in fiber_rays_w {
            let in_x = incl_x.orbit.ray_image[fr].ok_or(GeometryError::InconsistentCurveSystem)?;
            let in_locus = incl.orbit.ray_image[in_x]
                .ok_or(GeometryError::InconsistentCurveSystem)?;
            fiber_curve[in_locus] = Rat::one();
        }
        // must lie in N1: pair to zero with every lattice relation
        for i in 0..ring.fan.rank {
            let mut s = Rat::zero();
            for (r, c) in fiber_curve.iter().enumerate() {
                s += c * rat(ring.fan.rays[r][i]);
            }
            if !s.is_zero() {
                return Err(GeometryError::InconsistentCurveSystem);
            }
        }
    }

    Ok(ExceptionalLocus {
        ring,
        incl,
        h,
        psi,
        fiber_curve,
        cone,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    pub fn blowup_p2_pt() -> ThreeComponentGeometry {
        let p2 = Fan::projective_space(2).unwrap();
        build_blowup_geometry(&p2, &[0, 1]).unwrap()
    }

    pub fn blowup_p3_pt() -> ThreeComponentGeometry {
        let p3 = Fan::projective_space(3).unwrap();
        build_blowup_geometry(&p3, &[0, 1, 2]).unwrap()
    }

    #[test]
    fn blowup_p2_structure() {
        let g = blowup_p2_pt();
        assert_eq!(g.c_f0, -1);
        assert_eq!(g.x_plus().betti(), vec![1, 1, 1]);
        assert_eq!(g.x_minus().betti(), vec![1, 2, 1]);
        assert_eq!(g.f0().total_dim(), 1);
        assert!(g.validate_simple_wall().all_passed());
        // rho_{F-} = -[E]: its square integrates to -1 as E^2 does
        let e = g.p_minus_class();
        assert_eq!(g.x_minus().integrate(&g.x_minus().mul(&e, &e)), rat(-1));
        // rho_{F+} = 0 (trivial normal bundle of X x infinity)
        assert!(g.rho_plus.is_zero());
    }

    #[test]
    fn blowup_p3_structure() {
        let g = blowup_p3_pt();
        assert_eq!(g.c_f0, -2);
        assert_eq!(g.x_minus().total_dim(), 6);
        assert_eq!(g.x_plus().total_dim(), 4);
        assert_eq!(g.f0().total_dim(), 1);
        assert!(g.validate_simple_wall().all_passed());
    }

    #[test]
    fn blowup_p3_along_line() {
        // nontrivial wall: Z = invariant P1 in P3, codimension 2
        let p3 = Fan::projective_space(3).unwrap();
        let g = build_blowup_geometry(&p3, &[0, 1]).unwrap();
        assert_eq!(g.c_f0, -1);
        assert_eq!(g.f0().betti(), vec![1, 1]);
        assert_eq!(g.x_minus().total_dim(), 6); // 4 + 1*2
        assert!(g.validate_simple_wall().all_passed());
    }

    #[test]
    fn blowup_rejects_codim_one() {
        let p2 = Fan::projective_space(2).unwrap();
        assert!(matches!(
            build_blowup_geometry(&p2, &[0]),
            Err(GeometryError::CodimensionOne)
        ));
    }

    #[test]
    fn local_model_pt_1_2() {
        let g = build_local_model_geometry(&Fan::point(), &[vec![]], &[vec![], vec![]]).unwrap();
        assert_eq!(g.c_f0, -1);
        // X+ = P2, X- = F1
        assert_eq!(g.x_plus().betti(), vec![1, 1, 1]);
        assert_eq!(g.x_minus().betti(), vec![1, 2, 1]);
        assert!(g.validate_simple_wall().all_passed());
        // agreement with the blowup realization
        let bl = blowup_p2_pt();
        assert_eq!(bl.x_minus().betti(), g.x_minus().betti());
        assert_eq!(bl.c_f0, g.c_f0);
    }

    #[test]
    fn local_model_pt_2_3() {
        let g = build_local_model_geometry(
            &Fan::point(),
            &[vec![], vec![]],
            &[vec![], vec![], vec![]],
        )
        .unwrap();
        assert_eq!(g.c_f0, -1);
        assert_eq!(g.x_minus().total_dim(), 9);
        assert_eq!(g.x_plus().total_dim(), 8);
        assert!(g.validate_simple_wall().all_passed());
    }

    #[test]
    fn local_model_p1_flip() {
        // S = P1, V+ = O(1), V- = O + O
        let p1 = Fan::projective_space(1).unwrap();
        let g =
            build_local_model_geometry(&p1, &[vec![1, 0]], &[vec![0, 0], vec![0, 0]]).unwrap();
        assert_eq!(g.c_f0, -1);
        assert_eq!(g.x_minus().total_dim(), 8);
        assert_eq!(g.x_plus().total_dim(), 6);
        assert_eq!(g.f0().total_dim(), 2);
        assert!(g.validate_simple_wall().all_passed());
    }

    #[test]
    fn local_model_flop_flag() {
        let p1 = Fan::projective_space(1).unwrap();
        let g = build_local_model_geometry(
            &p1,
            &[vec![0, 0], vec![0, 0]],
            &[vec![0, 0], vec![0, 0]],
        )
        .unwrap();
        assert!(g.is_flop());
    }

    #[test]
    fn local_model_rejects_bad_ranks() {
        assert!(matches!(
            build_local_model_geometry(&Fan::point(), &[vec![], vec![]], &[vec![]]),
            Err(GeometryError::BadRanks)
        ));
    }

    #[test]
    fn dual_cone_examples() {
        let g = blowup_p2_pt();
        let lam = g.lambda_star();
        let a = g.a_class();
        assert!(g.dual_cone_membership(&lam, Side::Minus));
        assert!(g.dual_cone_membership(&a.sub(&lam), Side::Minus));
        assert!(!g.dual_cone_membership(&lam.sub(&a), Side::Minus));
        // plus side
        assert!(g.dual_cone_membership(&lam.sub(&a), Side::Plus));
        assert!(g.dual_cone_membership(&g.b_class().add(&a).sub(&lam), Side::Plus));
    }

    #[test]
    fn kappa_dual_examples() {
        let g = blowup_p2_pt();
        // kappa^*_{X-}(a) = a - lambda^*
        let a_q = QuotientCurve::new(g.a_on_xminus.clone());
        let img = g.kappa_dual(&a_q, KappaTarget::XMinus).unwrap();
        assert_eq!(img, g.a_class().sub(&g.lambda_star()));
        // kappa^*_{X+}(b) = lambda^* - a (formal fiber for the rank-one case)
        let b_q = QuotientCurve::fiber_multiple(g.x_plus().fan.num_rays(), Rat::one());
        let img = g.kappa_dual(&b_q, KappaTarget::XPlus).unwrap();
        assert_eq!(img, g.lambda_star().sub(&g.a_class()));
        // kappa^*_{F0}(0) = 0
        let z = QuotientCurve::new(vec![]);
        let img = g.kappa_dual(&z, KappaTarget::F0).unwrap();
        assert!(img.is_zero());
    }

    #[test]
    fn kappa_dual_examples_rank2() {
        // in the (pt,2,3) local model the fiber class b is an honest curve
        let g = build_local_model_geometry(
            &Fan::point(),
            &[vec![], vec![]],
            &[vec![], vec![], vec![]],
        )
        .unwrap();
        let b_q = QuotientCurve::new(g.b_on_xplus.clone().unwrap());
        let img = g.kappa_dual(&b_q, KappaTarget::XPlus).unwrap();
        assert_eq!(img, g.lambda_star().sub(&g.a_class()));
        let a_q = QuotientCurve::new(g.a_on_xminus.clone());
        let img = g.kappa_dual(&a_q, KappaTarget::XMinus).unwrap();
        assert_eq!(img, g.a_class().sub(&g.lambda_star()));
    }

    #[test]
    fn phi_of_b_is_minus_a() {
        for g in [
            blowup_p2_pt(),
            build_local_model_geometry(
                &Fan::point(),
                &[vec![], vec![]],
                &[vec![], vec![], vec![]],
            )
            .unwrap(),
        ] {
            let b_q = match &g.b_on_xplus {
                Some(bv) => QuotientCurve::new(bv.clone()),
                None => QuotientCurve::fiber_multiple(g.x_plus().fan.num_rays(), Rat::one()),
            };
            let phi_b = g.phi_curve(&b_q).unwrap();
            let expect: Vec<Rat> = g.a_on_xminus.iter().map(|x| -x).collect();
            assert_eq!(phi_b.beta, expect);
        }
    }

    #[test]
    fn phi_of_line_misses_exceptional() {
        // blowup (P2, pt): phi(l) pairs to 0 with the exceptional divisor
        let g = blowup_p2_pt();
        // the line in X+ = P2: pairs 1 with every ray divisor of P2
        let nr = g.x_plus().fan.num_rays();
        let line = QuotientCurve::new(vec![Rat::one(); nr]);
        let img = g.phi_curve(&line).unwrap();
        let pair = g.x_minus().curve_pair(&img.beta, &g.p_minus_class());
        assert!(pair.is_zero());
    }

    #[test]
    fn phi0_at_point_base() {
        let g = blowup_p2_pt();
        let z = QuotientCurve::new(vec![]);
        let img = g.phi0_curve(&z).unwrap();
        assert!(img.beta.iter().all(|x| x.is_zero()));
    }

    #[test]
    fn weight_tamper_detected() {
        let mut g = blowup_p2_pt();
        g.f_zero.weights_minus[0] = -2;
        let report = g.validate_simple_wall();
        assert!(!report.all_passed());
        assert!(report
            .checks
            .iter()
            .any(|c| c.name == "weights_pm1" && !c.passed));
    }

    #[test]
    fn novikov_degrees() {
        let g = blowup_p2_pt();
        // S_{F0} has degree 2 c_{F0} = -2
        let s_f0 = g.sigma_f0();
        assert_eq!(g.equivariant_novikov_degree(&s_f0), rat(-2));
        // quotient-side: deg Q^a on dP1 is 2 (a, c1(dP1)) = 2
        assert_eq!(g.x_minus().novikov_degree(&g.a_on_xminus), rat(2));
        // lambda^* has degree 2
        assert_eq!(g.equivariant_novikov_degree(&g.lambda_star()), rat(2));
    }

    #[test]
    fn exceptional_pairings() {
        // (a, c1(N_{X-/W})) = 1 and (b, c1(N_{X+/W})) = 1
        let g = build_local_model_geometry(
            &Fan::point(),
            &[vec![], vec![]],
            &[vec![], vec![], vec![]],
        )
        .unwrap();
        assert_eq!(
            g.x_minus().curve_pair(&g.a_on_xminus, &g.rho_minus),
            rat(1)
        );
        assert_eq!(
            g.x_plus()
                .curve_pair(g.b_on_xplus.as_ref().unwrap(), &g.rho_plus),
            rat(1)
        );
    }
}
