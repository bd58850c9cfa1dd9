//! Projective-bundle cohomology as H*(S)[h]/(sum c_i(V) h^{r-i}), built
//! recursively over a toric base or another tower. This is a second,
//! independent representation used to cross-validate the toric kernel.
//!
//! Only split bundles are supported; the Chern classes are the elementary
//! symmetric polynomials in the summand degree classes.

use crate::linalg::{Mat, Rat};
use crate::ring::{CohRing, El};
use num::{One, Zero};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TowerError {
    #[error("a projectivized bundle must have rank at least one")]
    RankZero,
    #[error("degree class is not homogeneous of degree one")]
    BadDegree,
    #[error("total dimensions differ: {0} vs {1}")]
    DimensionMismatch(usize, usize),
}

#[derive(Clone)]
pub enum TowerBase {
    Toric(Arc<CohRing>),
    Tower(Box<TowerRing>),
}

impl TowerBase {
    pub fn total_dim(&self) -> usize {
        match self {
            TowerBase::Toric(r) => r.total_dim(),
            TowerBase::Tower(t) => t.total_dim(),
        }
    }

    pub fn complex_dim(&self) -> usize {
        match self {
            TowerBase::Toric(r) => r.dim,
            TowerBase::Tower(t) => t.complex_dim(),
        }
    }

    pub fn basis_degrees(&self) -> Vec<usize> {
        match self {
            TowerBase::Toric(r) => r.basis_deg.clone(),
            TowerBase::Tower(t) => t.basis_degrees(),
        }
    }

    pub fn one(&self) -> Vec<Rat> {
        let mut v = vec![Rat::zero(); self.total_dim()];
        v[0] = Rat::one();
        v
    }

    pub fn mul(&self, a: &[Rat], b: &[Rat]) -> Vec<Rat> {
        match self {
            TowerBase::Toric(r) => r.mul(&El(a.to_vec()), &El(b.to_vec())).0,
            TowerBase::Tower(t) => t.mul(a, b),
        }
    }

    pub fn integrate(&self, a: &[Rat]) -> Rat {
        match self {
            TowerBase::Toric(r) => r.integrate(&El(a.to_vec())),
            TowerBase::Tower(t) => t.integrate(a),
        }
    }
}

/// H*(P(O(d_1) + .. + O(d_r))) over a base ring, with fiber generator h.
/// Elements are stored in the basis {b . h^k : 0 <= k < r}, base-major by
/// power of h.
#[derive(Clone)]
pub struct TowerRing {
    pub base: TowerBase,
    pub rank: usize,
    /// summand degree classes in base coordinates
    pub degrees: Vec<Vec<Rat>>,
    /// elementary symmetric classes c_1..c_r of the bundle
    pub chern: Vec<Vec<Rat>>,
}

/// Build the tower ring of a split bundle over a base.
pub fn build_tower(base: TowerBase, degrees: Vec<Vec<Rat>>) -> Result<TowerRing, TowerError> {
    let r = degrees.len();
    if r == 0 {
        return Err(TowerError::RankZero);
    }
    let bd = base.total_dim();
    for d in &degrees {
        if d.len() != bd {
            return Err(TowerError::BadDegree);
        }
    }
    // elementary symmetric polynomials by the product recurrence
    let mut elem: Vec<Vec<Rat>> = vec![base.one()];
    for d in &degrees {
        let mut next = vec![vec![Rat::zero(); bd]; elem.len() + 1];
        for (k, e) in elem.iter().enumerate() {
            for (i, c) in e.iter().enumerate() {
                next[k][i] = &next[k][i] + c;
            }
            let prod = base.mul(e, d);
            for (i, c) in prod.iter().enumerate() {
                next[k + 1][i] = &next[k + 1][i] + c;
            }
        }
        elem = next;
    }
    let chern = elem[1..].to_vec();
    Ok(TowerRing {
        base,
        rank: r,
        degrees,
        chern,
    })
}

impl TowerRing {
    pub fn total_dim(&self) -> usize {
        self.base.total_dim() * self.rank
    }

    pub fn complex_dim(&self) -> usize {
        self.base.complex_dim() + self.rank - 1
    }

    pub fn basis_degrees(&self) -> Vec<usize> {
        let bd = self.base.basis_degrees();
        let mut out = Vec::with_capacity(self.total_dim());
        for k in 0..self.rank {
            for d in &bd {
                out.push(d + k);
            }
        }
        out
    }

    pub fn zero(&self) -> Vec<Rat> {
        vec![Rat::zero(); self.total_dim()]
    }

    pub fn one(&self) -> Vec<Rat> {
        let mut v = self.zero();
        v[0] = Rat::one();
        v
    }

    pub fn h(&self) -> Vec<Rat> {
        let mut v = self.zero();
        if self.rank >= 2 {
            v[self.base.total_dim()] = Rat::one();
        } else {
            // P(L) = base with h = -d_1
            for (i, c) in self.degrees[0].iter().enumerate() {
                v[i] = -c.clone();
            }
        }
        v
    }

    pub fn from_base(&self, b: &[Rat]) -> Vec<Rat> {
        let mut v = self.zero();
        v[..b.len()].clone_from_slice(b);
        v
    }

    fn h_slice<'a>(&self, v: &'a [Rat], k: usize) -> &'a [Rat] {
        let bd = self.base.total_dim();
        &v[k * bd..(k + 1) * bd]
    }

    /// Multiply, reducing h-powers with h^r = -(c_1 h^{r-1} + .. + c_r).
    pub fn mul(&self, a: &[Rat], b: &[Rat]) -> Vec<Rat> {
        let bd = self.base.total_dim();
        let r = self.rank;
        // convolution up to h^{2r-2}
        let mut conv: Vec<Vec<Rat>> = vec![vec![Rat::zero(); bd]; 2 * r - 1];
        for i in 0..r {
            let ai = self.h_slice(a, i);
            if ai.iter().all(|c| c.is_zero()) {
                continue;
            }
            for j in 0..r {
                let bj = self.h_slice(b, j);
                if bj.iter().all(|c| c.is_zero()) {
                    continue;
                }
                let p = self.base.mul(ai, bj);
                for (t, c) in p.iter().enumerate() {
                    conv[i + j][t] = &conv[i + j][t] + c;
                }
            }
        }
        // reduce from the top
        for k in (r..2 * r - 1).rev() {
            if conv[k].iter().all(|c| c.is_zero()) {
                continue;
            }
            let top = conv[k].clone();
            for x in conv[k].iter_mut() {
                *x = Rat::zero();
            }
            for (i, ci) in self.chern.iter().enumerate() {
                // h^k = -c_{i+1} h^{k-1-i} . h^{...}: h^r = -sum c_{i+1} h^{r-1-i}
                let target = k - 1 - i;
                let prod = self.base.mul(&top, ci);
                for (t, c) in prod.iter().enumerate() {
                    conv[target][t] = &conv[target][t] - c;
                }
            }
        }
        let mut out = self.zero();
        for k in 0..r {
            for t in 0..bd {
                out[k * bd + t] = conv[k][t].clone();
            }
        }
        out
    }

    pub fn add(&self, a: &[Rat], b: &[Rat]) -> Vec<Rat> {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    pub fn scale(&self, a: &[Rat], c: &Rat) -> Vec<Rat> {
        a.iter().map(|x| x * c).collect()
    }

    /// psi_*: base-linear, h^{r-1} -> 1, h^i -> 0 for i < r-1. The input is in
    /// normal form, so this extracts the top h-coefficient.
    pub fn segre_pushforward(&self, a: &[Rat]) -> Vec<Rat> {
        self.h_slice(a, self.rank - 1).to_vec()
    }

    /// Pushforward of a bare power h^k, reducing first when k >= r.
    pub fn push_h_power(&self, k: usize) -> Vec<Rat> {
        let mut e = self.one();
        let h = self.h();
        for _ in 0..k {
            e = self.mul(&e, &h);
        }
        self.segre_pushforward(&e)
    }

    pub fn integrate(&self, a: &[Rat]) -> Rat {
        self.base.integrate(&self.segre_pushforward(a))
    }

    pub fn betti(&self) -> Vec<usize> {
        let degs = self.basis_degrees();
        let n = self.complex_dim();
        (0..=n)
            .map(|k| degs.iter().filter(|&&d| d == k).count())
            .collect()
    }
}

/// Outcome of comparing a tower ring against a toric ring.
pub enum CompareOutcome {
    /// images of the tower basis in the toric ring, as a change of basis
    Isomorphism { images: Vec<El> },
    Failure { reason: String },
}

/// Search for a degree-preserving ring isomorphism matching integration.
/// Candidate images for the tower generators are taken from signed ray
/// classes and pairwise sums/differences; the verified map is exact.
pub fn compare_with_toric(
    tower: &TowerRing,
    toric: &CohRing,
    hint: Option<Vec<El>>,
) -> Result<CompareOutcome, TowerError> {
    if tower.total_dim() != toric.total_dim() {
        return Err(TowerError::DimensionMismatch(
            tower.total_dim(),
            toric.total_dim(),
        ));
    }
    let tower_betti = tower.betti();
    let toric_betti = toric.betti();
    if tower_betti != toric_betti {
        return Ok(CompareOutcome::Failure {
            reason: format!(
                "graded dimensions differ: {:?} vs {:?}",
                tower_betti, toric_betti
            ),
        });
    }
    // Tower generators in degree one: the base degree-one basis elements and h.
    let bd = tower.base.total_dim();
    let base_degs = tower.base.basis_degrees();
    let mut gens: Vec<Vec<Rat>> = Vec::new();
    for (i, &d) in base_degs.iter().enumerate() {
        if d == 1 {
            let mut v = tower.zero();
            v[i] = Rat::one();
            gens.push(v);
        }
    }
    gens.push(tower.h());
    let ngen = gens.len();

    let candidates: Vec<Vec<El>> = match hint {
        Some(images) => images.into_iter().map(|e| vec![e]).collect(),
        None => {
            let mut cands = Vec::new();
            let rays: Vec<El> = (0..toric.fan.num_rays())
                .map(|r| toric.ray_class(r))
                .collect();
            for r in &rays {
                cands.push(r.clone());
                cands.push(r.neg());
            }
            for (i, r) in rays.iter().enumerate() {
                for s in rays.iter().skip(i + 1) {
                    cands.push(r.add(s));
                    cands.push(r.sub(s));
                    cands.push(s.sub(r));
                    cands.push(r.add(s).neg());
                }
            }
            cands.retain(|e| !e.is_zero());
            cands.sort();
            cands.dedup();
            vec![cands; ngen]
        }
    };
    if candidates.len() != ngen {
        return Ok(CompareOutcome::Failure {
            reason: "hint must supply one image per degree-one generator".into(),
        });
    }

    // Backtracking over candidate tuples; each complete tuple is verified.
    let mut choice = vec![0usize; ngen];
    'outer: loop {
        let images: Vec<&El> = (0..ngen).map(|g| &candidates[g][choice[g]]).collect();
        if let Some(imgs) = try_build_iso(tower, toric, &gens, &images, bd) {
            return Ok(CompareOutcome::Isomorphism { images: imgs });
        }
        // advance
        for g in (0..ngen).rev() {
            choice[g] += 1;
            if choice[g] < candidates[g].len() {
                continue 'outer;
            }
            choice[g] = 0;
            if g == 0 {
                break 'outer;
            }
        }
    }
    Ok(CompareOutcome::Failure {
        reason: "no generator matching produced a ring isomorphism".into(),
    })
}

fn try_build_iso(
    tower: &TowerRing,
    toric: &CohRing,
    gens: &[Vec<Rat>],
    images: &[&El],
    bd: usize,
) -> Option<Vec<El>> {
    // Express every tower basis element as a polynomial in the generators:
    // basis = b_j . h^k where b_j is a base basis monomial. We only support
    // bases generated in degree one (true for all rings this crate builds).
    // Map: phi(b_j . h^k) = phi(b_j) . phi(h)^k, with phi(b_j) built from the
    // base degree-one generators by expressing b_j as a product; to stay
    // generator-agnostic we instead require each base basis element of degree
    // d to be a product of degree-one basis elements, discovered greedily.
    let base_degs = tower.base.basis_degrees();
    let deg_one: Vec<usize> = (0..bd).filter(|&i| base_degs[i] == 1).collect();
    // image of base basis element i in the toric ring
    let mut base_img: Vec<Option<El>> = vec![None; bd];
    base_img[0] = Some(toric.one());
    for (gi, &i) in deg_one.iter().enumerate() {
        base_img[i] = Some(images[gi].clone());
    }
    // fill higher degrees: b = b1 * b2 decomposition by brute force
    let maxdeg = *base_degs.iter().max().unwrap_or(&0);
    for d in 2..=maxdeg {
        for i in 0..bd {
            if base_degs[i] != d || base_img[i].is_some() {
                continue;
            }
            // find a degree-one generator g and element e with g*e having a
            // nonzero coefficient at i, then solve linearly for the image of
            // the whole degree-d graded piece
        }
        // Solve all of degree d at once: the products of lower-degree basis
        // elements span degree d; set up a linear system.
        let ids: Vec<usize> = (0..bd).filter(|&i| base_degs[i] == d).collect();
        if ids.is_empty() {
            continue;
        }
        let mut rows: Vec<Vec<Rat>> = Vec::new();
        let mut rhs: Vec<Vec<Rat>> = Vec::new(); // toric coords
        for &g in &deg_one {
            for j in 0..bd {
                if base_degs[j] != d - 1 {
                    continue;
                }
                let (Some(gim), Some(jim)) = (&base_img[g], &base_img[j]) else {
                    continue;
                };
                let mut gv = vec![Rat::zero(); bd];
                gv[g] = Rat::one();
                let mut jv = vec![Rat::zero(); bd];
                jv[j] = Rat::one();
                let prod = tower.base.mul(&gv, &jv);
                rows.push(ids.iter().map(|&i| prod[i].clone()).collect());
                rhs.push(toric.mul(gim, jim).0);
            }
        }
        if rows.is_empty() {
            return None;
        }
        // rows * X = rhs where X[i] = image of basis element ids[i]
        let a = Mat::from_rows(rows);
        let tdim = toric.total_dim();
        let mut xs: Vec<Vec<Rat>> = vec![vec![Rat::zero(); tdim]; ids.len()];
        for col in 0..tdim {
            let b: Vec<Rat> = rhs.iter().map(|r| r[col].clone()).collect();
            let sol = crate::linalg::solve(&a, &b)?;
            // verify consistency (the system may be overdetermined)
            let chk = a.mul_vec(&sol);
            if chk != b {
                return None;
            }
            for (k, s) in sol.into_iter().enumerate() {
                xs[k][col] = s;
            }
        }
        for (k, &i) in ids.iter().enumerate() {
            base_img[i] = Some(El(xs[k].clone()));
        }
    }
    let h_img = images[gens.len() - 1];
    // images of all tower basis elements
    let mut imgs: Vec<El> = Vec::with_capacity(tower.total_dim());
    let mut hpow = toric.one();
    for k in 0..tower.rank {
        for i in 0..bd {
            imgs.push(toric.mul(&hpow, base_img[i].as_ref()?));
        }
        if k + 1 < tower.rank {
            hpow = toric.mul(&hpow, h_img);
        }
    }
    // bijectivity
    let rows: Vec<Vec<Rat>> = imgs.iter().map(|e| e.0.clone()).collect();
    if Mat::from_rows(rows).rank() != tower.total_dim() {
        return None;
    }
    // multiplicativity on all basis pairs, and integration match
    let dim = tower.total_dim();
    for i in 0..dim {
        let mut a = tower.zero();
        a[i] = Rat::one();
        if toric.integrate(&imgs[i]) != tower.integrate(&a) {
            return None;
        }
        for j in i..dim {
            let mut b = tower.zero();
            b[j] = Rat::one();
            let prod = tower.mul(&a, &b);
            let mut expect = El::zero(toric);
            for (t, c) in prod.iter().enumerate() {
                if !c.is_zero() {
                    expect = expect.add(&imgs[t].scale(c));
                }
            }
            if toric.mul(&imgs[i], &imgs[j]) != expect {
                return None;
            }
        }
    }
    Some(imgs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::Fan;
    use crate::linalg::rat;

    fn p1_base() -> TowerBase {
        TowerBase::Toric(Arc::new(
            CohRing::new(Fan::projective_space(1).unwrap()).unwrap(),
        ))
    }

    fn h_class(base: &TowerBase) -> Vec<Rat> {
        // the hyperplane class of P1 in base coordinates
        let mut v = vec![Rat::zero(); base.total_dim()];
        v[1] = Rat::one();
        v
    }

    #[test]
    fn tower_over_p1_o_o1() {
        let base = p1_base();
        let h_base = h_class(&base);
        let zero = vec![Rat::zero(); base.total_dim()];
        let t = build_tower(base, vec![zero, h_base.clone()]).unwrap();
        assert_eq!(t.total_dim(), 4);
        // relation: h^2 + H h = 0
        let h = t.h();
        let h2 = t.mul(&h, &h);
        let big_h = t.from_base(&h_base);
        let hh = t.mul(&big_h, &h);
        assert_eq!(h2, t.scale(&hh, &rat(-1)));
        // psi_*(h^2) = -H
        assert_eq!(t.push_h_power(2), h_base.iter().map(|c| -c).collect::<Vec<_>>());
        // psi_*(h) = 1, psi_*(1) = 0
        assert_eq!(t.push_h_power(1)[0], rat(1));
        assert!(t.push_h_power(0).iter().all(|c| c.is_zero()));
    }

    #[test]
    fn tower_over_point_is_projective_space() {
        let base = TowerBase::Toric(Arc::new(CohRing::point()));
        let t = build_tower(base, vec![vec![Rat::zero()]; 3]).unwrap();
        assert_eq!(t.betti(), vec![1, 1, 1]);
        let h = t.h();
        let h2 = t.mul(&h, &h);
        assert_eq!(t.integrate(&h2), rat(1));
    }

    #[test]
    fn tower_rank3_over_p2() {
        let base = TowerBase::Toric(Arc::new(
            CohRing::new(Fan::projective_space(2).unwrap()).unwrap(),
        ));
        let h_base = {
            let mut v = vec![Rat::zero(); base.total_dim()];
            v[1] = -Rat::one();
            v
        };
        let zero = vec![Rat::zero(); base.total_dim()];
        let t = build_tower(base, vec![h_base.clone(), h_base, zero]).unwrap();
        assert_eq!(t.total_dim(), 9);
    }

    #[test]
    fn compare_f1_both_ways() {
        let p1 = Fan::projective_space(1).unwrap();
        let (f1_fan, _) = crate::fan::projective_bundle(&p1, &[vec![0, 0], vec![1, 0]]).unwrap();
        let f1 = CohRing::new(f1_fan).unwrap();
        let base = p1_base();
        let h_base = h_class(&base);
        let zero = vec![Rat::zero(); base.total_dim()];
        let t = build_tower(base, vec![zero, h_base]).unwrap();
        match compare_with_toric(&t, &f1, None).unwrap() {
            CompareOutcome::Isomorphism { .. } => {}
            CompareOutcome::Failure { reason } => panic!("expected isomorphism: {reason}"),
        }
    }

    #[test]
    fn compare_p1xp1() {
        let p1 = Fan::projective_space(1).unwrap();
        let toric = CohRing::new(p1.product(&p1)).unwrap();
        let base = p1_base();
        let zero = vec![Rat::zero(); base.total_dim()];
        let t = build_tower(base, vec![zero.clone(), zero]).unwrap();
        match compare_with_toric(&t, &toric, None).unwrap() {
            CompareOutcome::Isomorphism { .. } => {}
            CompareOutcome::Failure { reason } => panic!("expected isomorphism: {reason}"),
        }
    }

    #[test]
    fn compare_dimension_mismatch() {
        let p2 = CohRing::new(Fan::projective_space(2).unwrap()).unwrap();
        let base = p1_base();
        let h_base = h_class(&base);
        let zero = vec![Rat::zero(); base.total_dim()];
        let t = build_tower(base, vec![zero, h_base]).unwrap();
        assert!(matches!(
            compare_with_toric(&t, &p2, None),
            Err(TowerError::DimensionMismatch(4, 3))
        ));
    }
}
