//! Fans of smooth complete toric varieties: construction (projective spaces,
//! split projective bundles, products, star subdivisions), validation, orbit
//! fans of invariant subvarieties, and wall curves.
//!
//! Rays are primitive integer vectors; maximal cones are sorted lists of ray
//! indices. Smoothness means every maximal cone is a lattice basis.

use crate::linalg::{self, rat, Mat, Rat};
use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum FanError {
    #[error("lattice rank must be positive for projective space")]
    BadRank,
    #[error("ray {0} is not primitive or is zero")]
    NotPrimitive(usize),
    #[error("rays {0} and {1} coincide")]
    DuplicateRay(usize, usize),
    #[error("cone {0:?} is not smooth (rays are not a lattice basis)")]
    NotSmooth(Vec<usize>),
    #[error("cone {0:?} has wrong dimension")]
    BadConeDim(Vec<usize>),
    #[error("wall {0:?} is shared by {1} maximal cones, expected 2")]
    BadWall(Vec<usize>, usize),
    #[error("cones {0:?} and {1:?} do not intersect in a common face")]
    NotAFan(Vec<usize>, Vec<usize>),
    #[error("cone {0:?} is not a cone of the fan")]
    NoSuchCone(Vec<usize>),
    #[error("star subdivision center must have dimension >= 2")]
    CenterTooSmall,
    #[error("degree vector has wrong length")]
    BadDegree,
    #[error("lattice map does not send cones into cones")]
    IncompatibleMap,
    #[error("point outside the support of the fan")]
    OutsideSupport,
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn is_primitive(v: &[i64]) -> bool {
    let g = v.iter().fold(0, |acc, &x| gcd(acc, x));
    g == 1 || (v.is_empty() && false)
}

/// A rational fan datum. Serialized as `{rays: [[int]], cones: [[int]]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Fan {
    pub rays: Vec<Vec<i64>>,
    pub cones: Vec<Vec<usize>>,
    #[serde(default)]
    pub rank: usize,
}

impl Fan {
    pub fn new(rank: usize, rays: Vec<Vec<i64>>, mut cones: Vec<Vec<usize>>) -> Self {
        for c in cones.iter_mut() {
            c.sort_unstable();
        }
        Fan { rays, cones, rank }
    }

    /// The fan of a point: rank zero, a single empty cone.
    pub fn point() -> Self {
        Fan::new(0, vec![], vec![vec![]])
    }

    /// The fan of P^n with rays e_1..e_n and -(e_1+..+e_n).
    pub fn projective_space(n: usize) -> Result<Self, FanError> {
        if n == 0 {
            return Err(FanError::BadRank);
        }
        let mut rays = Vec::with_capacity(n + 1);
        for i in 0..n {
            let mut v = vec![0i64; n];
            v[i] = 1;
            rays.push(v);
        }
        rays.push(vec![-1; n]);
        let cones = (0..=n)
            .map(|skip| (0..=n).filter(|&i| i != skip).collect())
            .collect();
        Ok(Fan::new(n, rays, cones))
    }

    pub fn num_rays(&self) -> usize {
        self.rays.len()
    }

    /// Pad each ray of `self` and `other` into a common lattice and take all
    /// products of maximal cones.
    pub fn product(&self, other: &Fan) -> Fan {
        let rank = self.rank + other.rank;
        let mut rays = Vec::new();
        for r in &self.rays {
            let mut v = r.clone();
            v.extend(std::iter::repeat(0).take(other.rank));
            rays.push(v);
        }
        for r in &other.rays {
            let mut v = vec![0; self.rank];
            v.extend_from_slice(r);
            rays.push(v);
        }
        let mut cones = Vec::new();
        for a in &self.cones {
            for b in &other.cones {
                let mut c = a.clone();
                c.extend(b.iter().map(|&i| i + self.num_rays()));
                cones.push(c);
            }
        }
        Fan::new(rank, rays, cones)
    }

    /// Full validation: primitive distinct rays, smooth full-dimensional
    /// maximal cones, pairwise intersections in common faces, and
    /// completeness via the wall condition.
    pub fn validate(&self) -> Result<(), FanError> {
        if self.rank == 0 {
            return if self.rays.is_empty() && self.cones == vec![Vec::<usize>::new()] {
                Ok(())
            } else {
                Err(FanError::BadConeDim(vec![]))
            };
        }
        for (i, r) in self.rays.iter().enumerate() {
            if r.len() != self.rank || !is_primitive(r) {
                return Err(FanError::NotPrimitive(i));
            }
            for (j, s) in self.rays.iter().enumerate().skip(i + 1) {
                if r == s {
                    return Err(FanError::DuplicateRay(i, j));
                }
            }
        }
        for c in &self.cones {
            if c.len() != self.rank {
                return Err(FanError::BadConeDim(c.clone()));
            }
            if self.cone_det(c).abs() != 1 {
                return Err(FanError::NotSmooth(c.clone()));
            }
        }
        // Pairwise intersections must be common faces, certified by a
        // separating functional.
        for (i, a) in self.cones.iter().enumerate() {
            for b in self.cones.iter().skip(i + 1) {
                if !self.meet_in_face(a, b) {
                    return Err(FanError::NotAFan(a.clone(), b.clone()));
                }
            }
        }
        // Completeness: every wall bounds exactly two maximal cones.
        for (wall, owners) in self.walls() {
            if owners.len() != 2 {
                return Err(FanError::BadWall(wall, owners.len()));
            }
        }
        Ok(())
    }

    fn cone_det(&self, cone: &[usize]) -> i64 {
        let n = self.rank;
        let mut m = Mat::zeros(n, n);
        for (j, &ri) in cone.iter().enumerate() {
            for i in 0..n {
                m[(i, j)] = rat(self.rays[ri][i]);
            }
        }
        // rational determinant via elimination
        det_rat(&mut m)
    }

    fn meet_in_face(&self, a: &[usize], b: &[usize]) -> bool {
        let f: Vec<usize> = a.iter().filter(|i| b.contains(i)).cloned().collect();
        let a_only: Vec<usize> = a.iter().filter(|i| !f.contains(i)).cloned().collect();
        let b_only: Vec<usize> = b.iter().filter(|i| !f.contains(i)).cloned().collect();
        if a_only.is_empty() && b_only.is_empty() {
            return true;
        }
        // Find m with <m,f>=0, <m,a_only> >= 1, <m,-b_only> >= 1.
        // Variables: m = p - q with p,q >= 0, plus slacks for inequalities.
        let n = self.rank;
        let n_ineq = a_only.len() + b_only.len();
        let rows = f.len() + n_ineq;
        let cols = 2 * n + n_ineq;
        let mut sys = Mat::zeros(rows, cols);
        let mut rhs = vec![Rat::zero(); rows];
        for (k, &ri) in f.iter().enumerate() {
            for i in 0..n {
                sys[(k, i)] = rat(self.rays[ri][i]);
                sys[(k, n + i)] = rat(-self.rays[ri][i]);
            }
        }
        for (k, &ri) in a_only.iter().chain(b_only.iter()).enumerate() {
            let sign = if k < a_only.len() { 1 } else { -1 };
            let row = f.len() + k;
            for i in 0..n {
                sys[(row, i)] = rat(sign * self.rays[ri][i]);
                sys[(row, n + i)] = rat(-sign * self.rays[ri][i]);
            }
            sys[(row, 2 * n + k)] = -Rat::one();
            rhs[row] = Rat::one();
        }
        linalg::nonneg_solution(&sys, &rhs).is_some()
    }

    /// All codimension-one faces with the maximal cones containing them.
    pub fn walls(&self) -> Vec<(Vec<usize>, Vec<usize>)> {
        let mut map: std::collections::BTreeMap<Vec<usize>, Vec<usize>> = Default::default();
        for (ci, c) in self.cones.iter().enumerate() {
            for skip in 0..c.len() {
                let mut w = c.clone();
                w.remove(skip);
                map.entry(w).or_default().push(ci);
            }
        }
        map.into_iter().collect()
    }

    /// Is the given set of ray indices a cone (face of a maximal cone)?
    pub fn is_cone(&self, rays: &[usize]) -> bool {
        let mut sorted = rays.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        sorted.len() == rays.len()
            && self
                .cones
                .iter()
                .any(|c| sorted.iter().all(|r| c.contains(r)))
    }

    /// Star subdivision at a smooth cone: inserts the ray sum and fans out.
    /// Returns the refined fan and the index of the new ray.
    pub fn star_subdivision(&self, center: &[usize]) -> Result<(Fan, usize), FanError> {
        if center.len() < 2 {
            return Err(FanError::CenterTooSmall);
        }
        if !self.is_cone(center) {
            return Err(FanError::NoSuchCone(center.to_vec()));
        }
        let mut new_ray = vec![0i64; self.rank];
        for &r in center {
            for i in 0..self.rank {
                new_ray[i] += self.rays[r][i];
            }
        }
        let mut rays = self.rays.clone();
        let new_idx = rays.len();
        rays.push(new_ray);
        let mut cones = Vec::new();
        for c in &self.cones {
            if center.iter().all(|r| c.contains(r)) {
                for &drop in center {
                    let mut nc: Vec<usize> =
                        c.iter().filter(|&&r| r != drop).cloned().collect();
                    nc.push(new_idx);
                    cones.push(nc);
                }
            } else {
                cones.push(c.clone());
            }
        }
        Ok((Fan::new(self.rank, rays, cones), new_idx))
    }

    /// Maximal cone whose span contains the point, with barycentric
    /// coordinates; used to evaluate support functions.
    pub fn locate(&self, point: &[Rat]) -> Result<(usize, Vec<Rat>), FanError> {
        for (ci, c) in self.cones.iter().enumerate() {
            let n = self.rank;
            let mut m = Mat::zeros(n, c.len());
            for (j, &ri) in c.iter().enumerate() {
                for i in 0..n {
                    m[(i, j)] = rat(self.rays[ri][i]);
                }
            }
            if let Some(coeffs) = linalg::solve_unique(&m, point) {
                if coeffs.iter().all(|x| !x.is_negative()) {
                    return Ok((ci, coeffs));
                }
            }
        }
        Err(FanError::OutsideSupport)
    }

    /// Piecewise-linear extension of ray values `a` evaluated at `point`:
    /// the support-function evaluation used by divisor pullbacks.
    pub fn support_eval(&self, a: &[Rat], point: &[Rat]) -> Result<Rat, FanError> {
        let (ci, coeffs) = self.locate(point)?;
        let mut val = Rat::zero();
        for (j, &ri) in self.cones[ci].iter().enumerate() {
            val += &coeffs[j] * &a[ri];
        }
        Ok(val)
    }

    /// Quotient fan of the orbit closure V(cone), with a caller-fixed or
    /// freshly computed projection to the quotient lattice.
    pub fn orbit_fan(
        &self,
        cone: &[usize],
        projection: Option<Mat>,
    ) -> Result<OrbitFan, FanError> {
        if !self.is_cone(cone) {
            return Err(FanError::NoSuchCone(cone.to_vec()));
        }
        let proj = match projection {
            Some(p) => p,
            None => self.quotient_projection(cone)?,
        };
        let qrank = self.rank - cone.len();
        assert_eq!(proj.rows, qrank);
        assert_eq!(proj.cols, self.rank);
        let mut ray_image: Vec<Option<usize>> = vec![None; self.num_rays()];
        let mut qrays: Vec<Vec<i64>> = Vec::new();
        let mut qcones: Vec<Vec<usize>> = Vec::new();
        for c in &self.cones {
            if !cone.iter().all(|r| c.contains(r)) {
                continue;
            }
            let mut qc = Vec::new();
            for &r in c {
                if cone.contains(&r) {
                    continue;
                }
                let img: Vec<i64> = (0..qrank)
                    .map(|i| {
                        let mut v = Rat::zero();
                        for j in 0..self.rank {
                            v += &proj[(i, j)] * rat(self.rays[r][j]);
                        }
                        assert!(v.is_integer());
                        num_to_i64(&v)
                    })
                    .collect();
                let idx = match ray_image[r] {
                    Some(i) => i,
                    None => {
                        if let Some(i) = qrays.iter().position(|q| *q == img) {
                            ray_image[r] = Some(i);
                            i
                        } else {
                            qrays.push(img);
                            ray_image[r] = Some(qrays.len() - 1);
                            qrays.len() - 1
                        }
                    }
                };
                qc.push(idx);
            }
            qc.sort_unstable();
            if !qcones.contains(&qc) {
                qcones.push(qc);
            }
        }
        Ok(OrbitFan {
            fan: Fan::new(qrank, qrays, qcones),
            ray_image,
            projection: proj,
            center: cone.to_vec(),
        })
    }

    /// Integer projection with kernel exactly the span of the cone's rays,
    /// surjective onto Z^(rank-k). Exists because the cone is smooth.
    pub fn quotient_projection(&self, cone: &[usize]) -> Result<Mat, FanError> {
        let n = self.rank;
        let k = cone.len();
        // Unimodular row reduction U*B = [I_k; 0] on the ray-column matrix B.
        let mut b: Vec<Vec<i64>> = (0..n)
            .map(|i| cone.iter().map(|&r| self.rays[r][i]).collect())
            .collect();
        let mut u: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { 1 } else { 0 }).collect())
            .collect();
        for col in 0..k {
            // Euclid on rows col..n in this column.
            loop {
                let mut piv: Option<usize> = None;
                for r in col..n {
                    if b[r][col] != 0 {
                        piv = match piv {
                            None => Some(r),
                            Some(p) => {
                                if b[r][col].abs() < b[p][col].abs() {
                                    Some(r)
                                } else {
                                    Some(p)
                                }
                            }
                        };
                    }
                }
                let p = piv.ok_or(FanError::NotSmooth(cone.to_vec()))?;
                b.swap(col, p);
                u.swap(col, p);
                let mut done = true;
                for r in col + 1..n {
                    if b[r][col] != 0 {
                        let q = b[r][col] / b[col][col];
                        for j in 0..k {
                            b[r][j] -= q * b[col][j];
                        }
                        for j in 0..n {
                            u[r][j] -= q * u[col][j];
                        }
                        if b[r][col] != 0 {
                            done = false;
                        }
                    }
                }
                if done {
                    break;
                }
            }
            if b[col][col].abs() != 1 {
                return Err(FanError::NotSmooth(cone.to_vec()));
            }
            if b[col][col] == -1 {
                for j in 0..k {
                    b[col][j] = -b[col][j];
                }
                for j in 0..n {
                    u[col][j] = -u[col][j];
                }
            }
            // Clear above the pivot.
            for r in 0..col {
                let q = b[r][col];
                if q != 0 {
                    for j in 0..k {
                        b[r][j] -= q * b[col][j];
                    }
                    for j in 0..n {
                        u[r][j] -= q * u[col][j];
                    }
                }
            }
        }
        let mut proj = Mat::zeros(n - k, n);
        for i in 0..n - k {
            for j in 0..n {
                proj[(i, j)] = rat(u[k + i][j]);
            }
        }
        Ok(proj)
    }

    /// Wall relations as curve classes: for each wall, the vector of
    /// intersection numbers with every ray divisor.
    pub fn wall_curves(&self) -> Vec<Vec<Rat>> {
        let mut out = Vec::new();
        for (wall, owners) in self.walls() {
            if owners.len() != 2 {
                continue;
            }
            let u1 = *self.cones[owners[0]]
                .iter()
                .find(|r| !wall.contains(r))
                .unwrap();
            let u2 = *self.cones[owners[1]]
                .iter()
                .find(|r| !wall.contains(r))
                .unwrap();
            // v_{u1} + v_{u2} + sum c_r v_r = 0 over the wall rays.
            let n = self.rank;
            let mut m = Mat::zeros(n, wall.len());
            let mut rhs = vec![Rat::zero(); n];
            for (j, &ri) in wall.iter().enumerate() {
                for i in 0..n {
                    m[(i, j)] = rat(self.rays[ri][i]);
                }
            }
            for i in 0..n {
                rhs[i] = rat(-(self.rays[u1][i] + self.rays[u2][i]));
            }
            let c = linalg::solve_unique(&m, &rhs).expect("wall relation");
            let mut class = vec![Rat::zero(); self.num_rays()];
            class[u1] = Rat::one();
            class[u2] = Rat::one();
            for (j, &ri) in wall.iter().enumerate() {
                class[ri] = c[j].clone();
            }
            out.push(class);
        }
        out
    }

    /// Generators of the Mori cone: the inclusion-minimal set of wall curves
    /// positively spanning all of them. Classes are primitive and sorted.
    pub fn mori_generators(&self) -> Vec<Vec<Rat>> {
        let mut curves = self.wall_curves();
        for c in curves.iter_mut() {
            make_primitive(c);
        }
        curves.sort();
        curves.dedup();
        let mut keep = vec![true; curves.len()];
        for i in 0..curves.len() {
            let others: Vec<Vec<Rat>> = curves
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i && keep[j])
                .map(|(_, v)| v.clone())
                .collect();
            if others.is_empty() {
                continue;
            }
            let m = Mat::from_rows(transpose(&others));
            if linalg::in_cone(&m, &curves[i]) {
                keep[i] = false;
            }
        }
        curves
            .into_iter()
            .zip(keep)
            .filter(|(_, k)| *k)
            .map(|(c, _)| c)
            .collect()
    }
}

/// Orbit closure V(center) as a fan, with bookkeeping to translate divisors.
#[derive(Clone, Debug)]
pub struct OrbitFan {
    pub fan: Fan,
    /// ambient ray index -> quotient ray index (None if not in the star)
    pub ray_image: Vec<Option<usize>>,
    /// quotient lattice projection, (rank-k) x rank
    pub projection: Mat,
    pub center: Vec<usize>,
}

fn det_rat(m: &mut Mat) -> i64 {
    let n = m.rows;
    let mut det = Rat::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
            return 0;
        };
        if p != c {
            for j in 0..n {
                let tmp = m[(p, j)].clone();
                m[(p, j)] = m[(c, j)].clone();
                m[(c, j)] = tmp;
            }
            det = -det;
        }
        det *= m[(c, c)].clone();
        let inv = m[(c, c)].clone();
        for i in c + 1..n {
            if !m[(i, c)].is_zero() {
                let f = &m[(i, c)] / &inv;
                for j in c..n {
                    let v = &m[(i, j)] - &f * &m[(c, j)];
                    m[(i, j)] = v;
                }
            }
        }
    }
    assert!(det.is_integer());
    num_to_i64(&det)
}

pub fn num_to_i64(r: &Rat) -> i64 {
    use num::ToPrimitive;
    r.to_integer().to_i64().expect("fits in i64")
}

pub fn make_primitive(v: &mut [Rat]) {
    use num::BigInt;
    let mut denom_lcm = BigInt::one();
    for x in v.iter() {
        denom_lcm = num::integer::lcm(denom_lcm, x.denom().clone());
    }
    let mut g = BigInt::zero();
    for x in v.iter() {
        let scaled = x.numer() * (&denom_lcm / x.denom());
        g = num::integer::gcd(g, scaled);
    }
    if g.is_zero() {
        return;
    }
    let factor = Rat::new(denom_lcm, g);
    for x in v.iter_mut() {
        *x *= factor.clone();
    }
}

pub fn transpose(rows: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    if rows.is_empty() {
        return vec![];
    }
    let c = rows[0].len();
    (0..c)
        .map(|j| rows.iter().map(|r| r[j].clone()).collect())
        .collect()
}

/// Split projective bundle P(O(D_1) + .. + O(D_r)) over a smooth complete
/// base. Degrees are torus-invariant divisors given by ray coefficients.
///
/// The hyperplane class h = c1(O(1)) satisfies prod_i (h + [D_i]) = 0; in the
/// output, h = [D_{fiber ray i}] - pullback(D_i) for every i < r, and for the
/// last summand the fiber ray is -(sum of the others).
pub fn projective_bundle(base: &Fan, degrees: &[Vec<i64>]) -> Result<(Fan, BundleData), FanError> {
    let r = degrees.len();
    if r == 0 {
        return Err(FanError::BadRank);
    }
    for d in degrees {
        if d.len() != base.num_rays() {
            return Err(FanError::BadDegree);
        }
    }
    let rank = base.rank + r - 1;
    let mut rays = Vec::new();
    // lifted base rays with twists b_{rho,k} = a^r_rho - a^k_rho
    for (rho, v) in base.rays.iter().enumerate() {
        let mut lifted = v.clone();
        for k in 0..r - 1 {
            lifted.push(degrees[r - 1][rho] - degrees[k][rho]);
        }
        rays.push(lifted);
    }
    // fiber rays
    let mut fiber_ids = Vec::new();
    for i in 0..r - 1 {
        let mut v = vec![0i64; rank];
        v[base.rank + i] = 1;
        fiber_ids.push(rays.len());
        rays.push(v);
    }
    if r >= 2 {
        let mut v = vec![0i64; rank];
        for i in 0..r - 1 {
            v[base.rank + i] = -1;
        }
        fiber_ids.push(rays.len());
        rays.push(v);
    }
    let nb = base.num_rays();
    let mut cones = Vec::new();
    for c in &base.cones {
        if r == 1 {
            cones.push(c.clone());
            continue;
        }
        for skip in 0..r {
            let mut nc = c.clone();
            for (i, &fid) in fiber_ids.iter().enumerate() {
                if i != skip {
                    nc.push(fid);
                }
            }
            cones.push(nc);
        }
    }
    let fan = Fan::new(rank, rays, cones);
    Ok((
        fan,
        BundleData {
            base_rank: base.rank,
            base_ray_count: nb,
            fiber_ray_ids: fiber_ids,
            degrees: degrees.to_vec(),
        },
    ))
}

/// Construction metadata of a split projective bundle fan.
#[derive(Clone, Debug)]
pub struct BundleData {
    pub base_rank: usize,
    pub base_ray_count: usize,
    /// indices of the fiber rays in the bundle fan (empty when rank one)
    pub fiber_ray_ids: Vec<usize>,
    pub degrees: Vec<Vec<i64>>,
}

impl BundleData {
    pub fn rank(&self) -> usize {
        self.degrees.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p1_fan() {
        let f = Fan::projective_space(1).unwrap();
        assert_eq!(f.num_rays(), 2);
        assert_eq!(f.cones.len(), 2);
        f.validate().unwrap();
    }

    #[test]
    fn p3_smooth_complete() {
        let f = Fan::projective_space(3).unwrap();
        f.validate().unwrap();
        assert_eq!(f.cones.len(), 4);
    }

    #[test]
    fn rejects_zero_dim() {
        assert_eq!(Fan::projective_space(0), Err(FanError::BadRank));
    }

    #[test]
    fn bundle_over_p1_is_f1() {
        // P(O + O(1)) over P1 = Bl_pt P2; the fan must be smooth, complete,
        // with 4 rays and 4 cones, and carry a (-1)-ray.
        let base = Fan::projective_space(1).unwrap();
        let (f, _) = projective_bundle(&base, &[vec![0, 0], vec![1, 0]]).unwrap();
        f.validate().unwrap();
        assert_eq!(f.num_rays(), 4);
        assert_eq!(f.cones.len(), 4);
        // some ray has self-intersection -1: neighbors sum to +1 times it
        let curves = f.wall_curves();
        assert!(curves
            .iter()
            .any(|c| c.iter().any(|x| *x == rat(-1))));
    }

    #[test]
    fn product_p1_p1() {
        let p1 = Fan::projective_space(1).unwrap();
        let f = p1.product(&p1);
        f.validate().unwrap();
        assert_eq!(f.num_rays(), 4);
        assert_eq!(f.cones.len(), 4);
    }

    #[test]
    fn blowup_p2_at_point() {
        let p2 = Fan::projective_space(2).unwrap();
        let (f, new_idx) = p2.star_subdivision(&[0, 1]).unwrap();
        f.validate().unwrap();
        assert_eq!(f.num_rays(), 4);
        assert_eq!(f.rays[new_idx], vec![1, 1]);
        assert_eq!(f.cones.len(), 4);
    }

    #[test]
    fn star_subdivision_rejects_rays() {
        let p2 = Fan::projective_space(2).unwrap();
        assert_eq!(
            p2.star_subdivision(&[0]).unwrap_err(),
            FanError::CenterTooSmall
        );
    }

    #[test]
    fn blowup_p2_x_p1_ray_count() {
        let w = Fan::projective_space(2)
            .unwrap()
            .product(&Fan::projective_space(1).unwrap());
        // center: the fixed point (rays 0,1 of P2) times the 0 of P1 (ray 3)
        let (f, _) = w.star_subdivision(&[0, 1, 3]).unwrap();
        f.validate().unwrap();
        assert_eq!(f.rank, 3);
        // 3 + 2 rays of the product plus the exceptional ray
        assert_eq!(f.num_rays(), 6);
    }

    #[test]
    fn mori_p2_single_generator() {
        let p2 = Fan::projective_space(2).unwrap();
        let gens = p2.mori_generators();
        assert_eq!(gens.len(), 1);
        // the line pairs to 1 with every coordinate hyperplane
        assert!(gens[0].iter().all(|x| *x == rat(1)));
    }

    #[test]
    fn mori_dp1_two_generators() {
        let p2 = Fan::projective_space(2).unwrap();
        let (dp1, e_idx) = p2.star_subdivision(&[0, 1]).unwrap();
        let gens = dp1.mori_generators();
        assert_eq!(gens.len(), 2);
        // one generator meets the exceptional ray in -1
        assert!(gens.iter().any(|g| g[e_idx] == rat(-1)));
        // the other is the fiber with E-degree +1
        assert!(gens.iter().any(|g| g[e_idx] == rat(1)));
    }

    #[test]
    fn mori_p1xp1_two_rulings() {
        let p1 = Fan::projective_space(1).unwrap();
        let f = p1.product(&p1);
        assert_eq!(f.mori_generators().len(), 2);
    }

    #[test]
    fn orbit_fan_of_blowup_divisor() {
        // E in Bl_pt P2 is a P1.
        let p2 = Fan::projective_space(2).unwrap();
        let (dp1, e_idx) = p2.star_subdivision(&[0, 1]).unwrap();
        let orbit = dp1.orbit_fan(&[e_idx], None).unwrap();
        orbit.fan.validate().unwrap();
        assert_eq!(orbit.fan.rank, 1);
        assert_eq!(orbit.fan.num_rays(), 2);
    }

    #[test]
    fn support_eval_on_refinement() {
        // pullback of the line through the blown-up point picks up E
        let p2 = Fan::projective_space(2).unwrap();
        let a = vec![rat(1), rat(0), rat(0)];
        let v_e = vec![rat(1), rat(1)];
        assert_eq!(p2.support_eval(&a, &v_e).unwrap(), rat(1));
    }
}
