//! Exact cohomology rings of smooth complete toric varieties.
//!
//! H*(X) is presented by the Stanley-Reisner ideal plus linear relations in
//! the ray variables. Degreewise normal forms are computed once by rational
//! row reduction and cached; no Groebner machinery. Integration is normalized
//! so that the product of the rays of one maximal cone integrates to 1, and
//! consistency of that choice is asserted across all maximal cones.

use crate::fan::{Fan, FanError, OrbitFan};
use crate::linalg::{self, rat, Mat, Rat};
use num::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RingError {
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error("betti numbers do not sum to the number of maximal cones")]
    BettiMismatch,
    #[error("integration normalization differs between maximal cones")]
    IntegrationInconsistent,
    #[error("poincare pairing is degenerate in degree {0}")]
    DegeneratePairing(usize),
    #[error("element is not homogeneous of the expected degree")]
    NotHomogeneous,
    #[error("the lattice map is not compatible with the fans")]
    BadMorphism,
}

/// A cohomology class in the fixed monomial basis of its ring.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct El(pub Vec<Rat>);

impl El {
    pub fn zero(ring: &CohRing) -> El {
        El(vec![Rat::zero(); ring.basis.len()])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &El) -> El {
        El(self
            .0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a + b)
            .collect())
    }

    pub fn sub(&self, other: &El) -> El {
        El(self
            .0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a - b)
            .collect())
    }

    pub fn scale(&self, c: &Rat) -> El {
        El(self.0.iter().map(|a| a * c).collect())
    }

    pub fn neg(&self) -> El {
        El(self.0.iter().map(|a| -a).collect())
    }
}

type Mono = Vec<u32>;

fn mono_degree(m: &Mono) -> usize {
    m.iter().map(|&e| e as usize).sum()
}

fn monomials_of_degree(nvars: usize, deg: usize) -> Vec<Mono> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; nvars];
    fn rec(cur: &mut Mono, var: usize, left: usize, out: &mut Vec<Mono>) {
        if var + 1 == cur.len() {
            cur[var] = left as u32;
            out.push(cur.clone());
            cur[var] = 0;
            return;
        }
        for take in (0..=left).rev() {
            cur[var] = take as u32;
            rec(cur, var + 1, left - take, out);
        }
        cur[var] = 0;
    }
    if nvars == 0 {
        if deg == 0 {
            out.push(vec![]);
        }
        return out;
    }
    rec(&mut cur, 0, deg, &mut out);
    out
}

struct DegreeData {
    monos: Vec<Mono>,
    /// monomial index -> either a basis index or an expansion over basis
    reduce: Vec<Reduction>,
    basis_ids: Vec<usize>, // global basis indices for this degree
}

enum Reduction {
    Basis(usize),           // position within this degree's basis
    Expand(Vec<(usize, Rat)>), // positions within this degree's basis
}

/// Exact cohomology ring of a smooth complete toric variety.
pub struct CohRing {
    pub fan: Fan,
    pub dim: usize,
    /// basis monomials in ray variables, grouped by degree
    pub basis: Vec<Mono>,
    pub basis_deg: Vec<usize>,
    degree_start: Vec<usize>,
    by_degree: Vec<DegreeData>,
    mult_table: Vec<Vec<El>>,
    /// integration values of the top-degree basis (a single entry)
    top_integral: Rat,
    pairing: Vec<Mat>,     // per degree k: pairing H^k x H^{n-k}
    pairing_inv: Vec<Mat>, // inverses
    /// minimal non-faces of the fan (Stanley-Reisner generators)
    pub primitive_collections: Vec<Vec<usize>>,
}

impl CohRing {
    pub fn point() -> CohRing {
        CohRing::new(Fan::point()).expect("point ring")
    }

    pub fn new(fan: Fan) -> Result<CohRing, RingError> {
        fan.validate()?;
        let n = fan.rank;
        let nv = fan.num_rays();
        let prim = minimal_nonfaces(&fan);

        // Linear relations: for each lattice coordinate i, sum_rho v_rho[i] x_rho.
        let linear: Vec<Vec<(usize, Rat)>> = (0..n)
            .map(|i| {
                (0..nv)
                    .filter(|&r| fan.rays[r][i] != 0)
                    .map(|r| (r, rat(fan.rays[r][i])))
                    .collect()
            })
            .collect();

        let mut by_degree = Vec::new();
        let mut basis = Vec::new();
        let mut basis_deg = Vec::new();
        let mut degree_start = Vec::new();
        for k in 0..=n {
            let monos = monomials_of_degree(nv, k);
            let index_of = |m: &Mono, monos: &Vec<Mono>| monos.iter().position(|x| x == m);
            let mut rows: Vec<Vec<Rat>> = Vec::new();
            // linear relation times degree k-1 monomials
            if k >= 1 {
                for m in monomials_of_degree(nv, k - 1) {
                    for l in &linear {
                        let mut row = vec![Rat::zero(); monos.len()];
                        for (r, c) in l {
                            let mut mm = m.clone();
                            mm[*r] += 1;
                            let idx = index_of(&mm, &monos).unwrap();
                            row[idx] = &row[idx] + c;
                        }
                        rows.push(row);
                    }
                }
            }
            // Stanley-Reisner generators times complementary monomials
            for p in &prim {
                if p.len() <= k {
                    for m in monomials_of_degree(nv, k - p.len()) {
                        let mut mm = m.clone();
                        for &r in p {
                            mm[r] += 1;
                        }
                        let mut row = vec![Rat::zero(); monos.len()];
                        row[index_of(&mm, &monos).unwrap()] = Rat::one();
                        rows.push(row);
                    }
                }
            }
            let mut mat = if rows.is_empty() {
                Mat::zeros(0, monos.len())
            } else {
                Mat::from_rows(rows)
            };
            let pivots = mat.rref();
            let mut reduce = Vec::with_capacity(monos.len());
            let nonpivot: Vec<usize> =
                (0..monos.len()).filter(|c| !pivots.contains(c)).collect();
            for c in 0..monos.len() {
                if let Some(prow) = pivots.iter().position(|&p| p == c) {
                    let exp: Vec<(usize, Rat)> = nonpivot
                        .iter()
                        .enumerate()
                        .filter(|(_, &np)| !mat[(prow, np)].is_zero())
                        .map(|(bi, &np)| (bi, -mat[(prow, np)].clone()))
                        .collect();
                    reduce.push(Reduction::Expand(exp));
                } else {
                    let bi = nonpivot.iter().position(|&np| np == c).unwrap();
                    reduce.push(Reduction::Basis(bi));
                }
            }
            degree_start.push(basis.len());
            let basis_ids: Vec<usize> =
                (0..nonpivot.len()).map(|i| basis.len() + i).collect();
            for &np in &nonpivot {
                basis.push(monos[np].clone());
                basis_deg.push(k);
            }
            by_degree.push(DegreeData {
                monos,
                reduce,
                basis_ids,
            });
        }
        degree_start.push(basis.len());

        if basis.len() != fan.cones.len().max(1) {
            return Err(RingError::BettiMismatch);
        }
        if by_degree[n].basis_ids.len() != 1 && n > 0 {
            return Err(RingError::BettiMismatch);
        }

        let mut ring = CohRing {
            fan,
            dim: n,
            basis,
            basis_deg,
            degree_start,
            by_degree,
            mult_table: Vec::new(),
            top_integral: Rat::one(),
            pairing: Vec::new(),
            pairing_inv: Vec::new(),
            primitive_collections: prim,
        };

        // Integration normalization from the first maximal cone; all cones
        // must agree.
        if n > 0 {
            let mut norm: Option<Rat> = None;
            for c in &ring.fan.cones.clone() {
                let mut m = vec![0u32; nv];
                for &r in c {
                    m[r] += 1;
                }
                let e = ring.reduce_monomial(&m, &Rat::one());
                let top = ring.degree_start[n];
                let coeff = e.0[top].clone();
                match &norm {
                    None => norm = Some(coeff),
                    Some(x) => {
                        if *x != coeff {
                            return Err(RingError::IntegrationInconsistent);
                        }
                    }
                }
            }
            let c = norm.unwrap();
            if c.is_zero() {
                return Err(RingError::IntegrationInconsistent);
            }
            ring.top_integral = Rat::one() / c;
        }

        ring.build_mult_table();
        ring.build_pairings()?;
        Ok(ring)
    }

    fn build_mult_table(&mut self) {
        let d = self.basis.len();
        let mut table = Vec::with_capacity(d);
        for i in 0..d {
            let mut row = Vec::with_capacity(d);
            for j in 0..d {
                let deg = self.basis_deg[i] + self.basis_deg[j];
                if deg > self.dim {
                    row.push(El::zero(self));
                } else {
                    let mut m = self.basis[i].clone();
                    for (k, e) in self.basis[j].iter().enumerate() {
                        m[k] += e;
                    }
                    row.push(self.reduce_monomial(&m, &Rat::one()));
                }
            }
            table.push(row);
        }
        self.mult_table = table;
    }

    fn build_pairings(&mut self) -> Result<(), RingError> {
        for k in 0..=self.dim {
            let a = &self.by_degree[k].basis_ids;
            let b = &self.by_degree[self.dim - k].basis_ids;
            if a.len() != b.len() {
                return Err(RingError::DegeneratePairing(k));
            }
            let mut m = Mat::zeros(a.len(), b.len());
            for (i, &ai) in a.iter().enumerate() {
                for (j, &bj) in b.iter().enumerate() {
                    let p = self.mul_basis(ai, bj);
                    m[(i, j)] = self.integrate(&p);
                }
            }
            if m.rank() != a.len() {
                return Err(RingError::DegeneratePairing(k));
            }
            let inv = invert(&m).ok_or(RingError::DegeneratePairing(k))?;
            self.pairing.push(m);
            self.pairing_inv.push(inv);
        }
        Ok(())
    }

    fn reduce_monomial(&self, m: &Mono, coeff: &Rat) -> El {
        let deg = mono_degree(m);
        let mut out = El::zero(self);
        if deg > self.dim {
            return out;
        }
        let dd = &self.by_degree[deg];
        let idx = dd.monos.iter().position(|x| x == m).expect("known monomial");
        match &dd.reduce[idx] {
            Reduction::Basis(bi) => {
                out.0[dd.basis_ids[*bi]] = coeff.clone();
            }
            Reduction::Expand(terms) => {
                for (bi, c) in terms {
                    out.0[dd.basis_ids[*bi]] = &out.0[dd.basis_ids[*bi]] + &(c * coeff);
                }
            }
        }
        out
    }

    pub fn one(&self) -> El {
        let mut e = El::zero(self);
        e.0[0] = Rat::one();
        e
    }

    /// The class of the ray divisor D_rho.
    pub fn ray_class(&self, rho: usize) -> El {
        let mut m = vec![0u32; self.fan.num_rays()];
        m[rho] = 1;
        self.reduce_monomial(&m, &Rat::one())
    }

    /// Anticanonical class: the sum of all ray classes.
    pub fn c1(&self) -> El {
        let mut e = El::zero(self);
        for rho in 0..self.fan.num_rays() {
            e = e.add(&self.ray_class(rho));
        }
        e
    }

    /// Class of a torus-invariant divisor given by ray coefficients.
    pub fn divisor_class(&self, coeffs: &[Rat]) -> El {
        let mut e = El::zero(self);
        for (rho, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                e = e.add(&self.ray_class(rho).scale(c));
            }
        }
        e
    }

    fn mul_basis(&self, i: usize, j: usize) -> El {
        self.mult_table[i][j].clone()
    }

    pub fn mul(&self, a: &El, b: &El) -> El {
        let mut out = El::zero(self);
        for (i, ca) in a.0.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            for (j, cb) in b.0.iter().enumerate() {
                if cb.is_zero() {
                    continue;
                }
                let t = &self.mult_table[i][j];
                let f = ca * cb;
                for (k, tc) in t.0.iter().enumerate() {
                    if !tc.is_zero() {
                        out.0[k] = &out.0[k] + &(tc * &f);
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, a: &El, e: usize) -> El {
        let mut out = self.one();
        for _ in 0..e {
            out = self.mul(&out, a);
        }
        out
    }

    pub fn integrate(&self, a: &El) -> Rat {
        if self.dim == 0 {
            return a.0[0].clone();
        }
        let top = self.degree_start[self.dim];
        &a.0[top] * &self.top_integral
    }

    pub fn poincare_pair(&self, a: &El, b: &El) -> Rat {
        self.integrate(&self.mul(a, b))
    }

    /// Total dimension of the cohomology.
    pub fn total_dim(&self) -> usize {
        self.basis.len()
    }

    pub fn betti(&self) -> Vec<usize> {
        (0..=self.dim)
            .map(|k| self.by_degree[k].basis_ids.len())
            .collect()
    }

    pub fn degree_basis_ids(&self, k: usize) -> &[usize] {
        &self.by_degree[k].basis_ids
    }

    pub fn degree_component(&self, a: &El, k: usize) -> El {
        let mut out = El::zero(self);
        for &i in self.degree_basis_ids(k) {
            out.0[i] = a.0[i].clone();
        }
        out
    }

    pub fn is_homogeneous(&self, a: &El) -> Option<usize> {
        let mut deg = None;
        for (i, c) in a.0.iter().enumerate() {
            if !c.is_zero() {
                match deg {
                    None => deg = Some(self.basis_deg[i]),
                    Some(d) if d == self.basis_deg[i] => {}
                    _ => return None,
                }
            }
        }
        deg.or(Some(0))
    }

    /// The class dual to a point (integrates to 1).
    pub fn point_class(&self) -> El {
        let mut e = El::zero(self);
        let top = self.degree_start[self.dim];
        e.0[top] = self.top_integral.clone().recip();
        let c = self.integrate(&e);
        e.scale(&(Rat::one() / c))
    }

    /// Intersection pairing of a curve (vector of intersection numbers with
    /// each ray divisor) against a degree-one class.
    pub fn curve_pair(&self, curve: &[Rat], divisor: &El) -> Rat {
        // write the divisor in ray classes: basis monomials of degree one are
        // single ray variables
        let mut total = Rat::zero();
        for (i, c) in divisor.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            assert_eq!(self.basis_deg[i], 1, "curve_pair expects a divisor class");
            let rho = self.basis[i]
                .iter()
                .position(|&e| e == 1)
                .expect("degree-one basis element is a ray variable");
            total += c * &curve[rho];
        }
        total
    }

    /// 2 (beta, c1): the grading of the Novikov variable Q^beta.
    pub fn novikov_degree(&self, curve: &[Rat]) -> Rat {
        let sum: Rat = curve.iter().fold(Rat::zero(), |s, x| s + x);
        rat(2) * sum
    }

    /// Express a degree-one class as ray-divisor coefficients (a choice of
    /// representative; well defined up to linear equivalence).
    pub fn divisor_coefficients(&self, divisor: &El) -> Vec<Rat> {
        let mut coeffs = vec![Rat::zero(); self.fan.num_rays()];
        for (i, c) in divisor.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            assert_eq!(self.basis_deg[i], 1);
            let rho = self.basis[i].iter().position(|&e| e == 1).unwrap();
            coeffs[rho] = c.clone();
        }
        coeffs
    }
}

fn invert(m: &Mat) -> Option<Mat> {
    let n = m.rows;
    let mut aug = Mat::zeros(n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            aug[(i, j)] = m[(i, j)].clone();
        }
        aug[(i, n + i)] = Rat::one();
    }
    let piv = aug.rref();
    if piv.len() != n || piv.iter().enumerate().any(|(i, &p)| p != i) {
        return None;
    }
    let mut inv = Mat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            inv[(i, j)] = aug[(i, n + j)].clone();
        }
    }
    Some(inv)
}

fn minimal_nonfaces(fan: &Fan) -> Vec<Vec<usize>> {
    let nv = fan.num_rays();
    let mut nonfaces: Vec<Vec<usize>> = Vec::new();
    // Enumerate subsets in order of size so minimality can be checked against
    // already-found nonfaces.
    for size in 1..=nv {
        let mut subset: Vec<usize> = (0..size).collect();
        loop {
            if !fan.is_cone(&subset)
                && !nonfaces
                    .iter()
                    .any(|nf| nf.iter().all(|r| subset.contains(r)))
            {
                nonfaces.push(subset.clone());
            }
            // next combination
            let mut i = size;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                if subset[i] != i + nv - size {
                    subset[i] += 1;
                    for j in i + 1..size {
                        subset[j] = subset[j - 1] + 1;
                    }
                    break;
                }
                if i == 0 {
                    subset.clear();
                    break;
                }
            }
            if subset.is_empty() || subset.len() != size {
                break;
            }
            if i == 0 && subset[0] > nv - size {
                break;
            }
        }
        // restore for next size
        if size == nv {
            break;
        }
    }
    nonfaces
}

/// A toric morphism: a lattice map sending each source cone into some target
/// cone. Supports exact pullback (a ring map) and its Poincare adjoint.
pub struct ToricMorphism {
    /// target.rank x source.rank matrix
    pub lattice: Mat,
}

impl ToricMorphism {
    pub fn identity(rank: usize) -> Self {
        ToricMorphism {
            lattice: Mat::identity(rank),
        }
    }

    pub fn new(lattice: Mat) -> Self {
        ToricMorphism { lattice }
    }

    fn map_point(&self, v: &[i64]) -> Vec<Rat> {
        (0..self.lattice.rows)
            .map(|i| {
                let mut s = Rat::zero();
                for (j, &x) in v.iter().enumerate() {
                    s += &self.lattice[(i, j)] * rat(x);
                }
                s
            })
            .collect()
    }

    /// Pull back a class along the morphism source -> target.
    pub fn pullback(
        &self,
        source: &CohRing,
        target: &CohRing,
        class: &El,
    ) -> Result<El, RingError> {
        // Pull back each target ray class once, then extend multiplicatively.
        let mut ray_pullbacks = Vec::with_capacity(target.fan.num_rays());
        for rho in 0..target.fan.num_rays() {
            let mut a = vec![Rat::zero(); target.fan.num_rays()];
            a[rho] = Rat::one();
            let mut coeffs = vec![Rat::zero(); source.fan.num_rays()];
            for r in 0..source.fan.num_rays() {
                let img = self.map_point(&source.fan.rays[r]);
                if img.iter().all(|x| x.is_zero()) {
                    continue;
                }
                coeffs[r] = target
                    .fan
                    .support_eval(&a, &img)
                    .map_err(|_| RingError::BadMorphism)?;
            }
            ray_pullbacks.push(source.divisor_class(&coeffs));
        }
        let mut out = El::zero(source);
        for (i, c) in class.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut term = source.one();
            for (rho, &e) in target.basis[i].iter().enumerate() {
                for _ in 0..e {
                    term = source.mul(&term, &ray_pullbacks[rho]);
                }
            }
            out = out.add(&term.scale(c));
        }
        Ok(out)
    }

    /// Poincare-pairing adjoint of the pullback: the pushforward
    /// H^k(source) -> H^{k - 2(dim source - dim target)}(target), satisfying
    /// the projection formula by construction.
    pub fn pushforward(
        &self,
        source: &CohRing,
        target: &CohRing,
        class: &El,
    ) -> Result<El, RingError> {
        let shift = source.dim - target.dim; // complex codimension drop
        let mut out = El::zero(target);
        for k in 0..=source.dim {
            let part = source.degree_component(class, k);
            if part.is_zero() {
                continue;
            }
            if k < shift || k - shift > target.dim {
                continue;
            }
            let tdeg = k - shift;
            let t_ids = target.degree_basis_ids(tdeg).to_vec();
            let comp_ids = target.degree_basis_ids(target.dim - tdeg).to_vec();
            // <f_* a, b_j> = <a, f^* b_j>
            let mut rhs = Vec::with_capacity(comp_ids.len());
            for &bj in &comp_ids {
                let mut b = El::zero(target);
                b.0[bj] = Rat::one();
                let fb = self.pullback(source, target, &b)?;
                rhs.push(source.poincare_pair(&part, &fb));
            }
            // solve pairing * coords = rhs
            let pm = &target.pairing[tdeg];
            let coords = linalg::solve_unique(pm, &rhs).ok_or(RingError::DegeneratePairing(tdeg))?;
            for (i, &ti) in t_ids.iter().enumerate() {
                out.0[ti] = &out.0[ti] + &coords[i];
            }
        }
        Ok(out)
    }
}

/// Restriction of classes and divisors to an invariant subvariety V(center),
/// realized on the orbit fan.
pub struct OrbitRestriction {
    pub orbit: OrbitFan,
    /// per ambient ray: the restriction of its divisor as ray coefficients on
    /// the orbit fan
    pub ray_restrictions: Vec<Vec<Rat>>,
}

impl OrbitRestriction {
    pub fn new(ambient: &Fan, orbit: OrbitFan) -> Result<Self, RingError> {
        let qnv = orbit.fan.num_rays();
        let mut ray_restrictions = Vec::with_capacity(ambient.num_rays());
        for r in 0..ambient.num_rays() {
            let mut coeffs = vec![Rat::zero(); qnv];
            if let Some(i) = orbit.ray_image[r] {
                coeffs[i] = Rat::one();
            } else if orbit.center.contains(&r) {
                // choose m with <m, v_{r'}> = -delta_{r r'} on the center
                let n = ambient.rank;
                let mut sys = Mat::zeros(orbit.center.len(), n);
                let mut rhs = vec![Rat::zero(); orbit.center.len()];
                for (i, &cr) in orbit.center.iter().enumerate() {
                    for j in 0..n {
                        sys[(i, j)] = rat(ambient.rays[cr][j]);
                    }
                    if cr == r {
                        rhs[i] = -Rat::one();
                    }
                }
                let m = linalg::solve(&sys, &rhs).ok_or(RingError::BadMorphism)?;
                for rho in 0..ambient.num_rays() {
                    if orbit.center.contains(&rho) {
                        continue;
                    }
                    let Some(img) = orbit.ray_image[rho] else {
                        continue;
                    };
                    let mut pair = Rat::zero();
                    for j in 0..n {
                        pair += &m[j] * rat(ambient.rays[rho][j]);
                    }
                    coeffs[img] = &coeffs[img] + &pair;
                }
            }
            ray_restrictions.push(coeffs);
        }
        Ok(OrbitRestriction {
            orbit,
            ray_restrictions,
        })
    }

    /// Ring map H*(ambient) -> H*(V(center)).
    pub fn restrict(&self, ambient: &CohRing, orbit_ring: &CohRing, class: &El) -> El {
        let mut out = El::zero(orbit_ring);
        for (i, c) in class.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut term = orbit_ring.one();
            for (rho, &e) in ambient.basis[i].iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let d = orbit_ring.divisor_class(&self.ray_restrictions[rho]);
                for _ in 0..e {
                    term = orbit_ring.mul(&term, &d);
                }
            }
            out = out.add(&term.scale(c));
        }
        out
    }

    /// Pushforward of a curve class from the orbit into the ambient variety:
    /// intersection numbers against ambient ray divisors are computed by
    /// restricting the divisor.
    pub fn push_curve(&self, curve: &[Rat]) -> Vec<Rat> {
        (0..self.ray_restrictions.len())
            .map(|rho| {
                self.ray_restrictions[rho]
                    .iter()
                    .zip(curve)
                    .map(|(a, b)| a * b)
                    .fold(Rat::zero(), |s, x| s + x)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::projective_bundle;

    fn p(n: usize) -> CohRing {
        CohRing::new(Fan::projective_space(n).unwrap()).unwrap()
    }

    #[test]
    fn p2_ring() {
        let r = p(2);
        assert_eq!(r.betti(), vec![1, 1, 1]);
        let h = r.ray_class(0);
        let h2 = r.mul(&h, &h);
        assert_eq!(r.integrate(&h2), rat(1));
        let h3 = r.mul(&h2, &h);
        assert!(h3.is_zero());
    }

    #[test]
    fn p1xp1_ring() {
        let p1 = Fan::projective_space(1).unwrap();
        let r = CohRing::new(p1.product(&p1)).unwrap();
        assert_eq!(r.betti(), vec![1, 2, 1]);
        let h1 = r.ray_class(0);
        let h2 = r.ray_class(2);
        assert_eq!(r.integrate(&r.mul(&h1, &h2)), rat(1));
        assert_eq!(r.integrate(&r.mul(&h1, &h1)), rat(0));
    }

    #[test]
    fn dp1_exceptional_square() {
        let p2 = Fan::projective_space(2).unwrap();
        let (f, e_idx) = p2.star_subdivision(&[0, 1]).unwrap();
        let r = CohRing::new(f).unwrap();
        assert_eq!(r.betti(), vec![1, 2, 1]);
        let e = r.ray_class(e_idx);
        assert_eq!(r.integrate(&r.mul(&e, &e)), rat(-1));
    }

    #[test]
    fn betti_convolution_for_bundles() {
        // P(O + O(1)) over P1: betti (1,2,1)
        let base = Fan::projective_space(1).unwrap();
        let (f, _) = projective_bundle(&base, &[vec![0, 0], vec![1, 0]]).unwrap();
        let r = CohRing::new(f).unwrap();
        assert_eq!(r.betti(), vec![1, 2, 1]);
        // rank 3 trivial bundle over a point: P2
        let (f, _) = projective_bundle(&Fan::point(), &[vec![], vec![], vec![]]).unwrap();
        let r = CohRing::new(f).unwrap();
        assert_eq!(r.betti(), vec![1, 1, 1]);
    }

    #[test]
    fn bundle_hyperplane_relation() {
        // P(O + O(1)) over P1: h^2 + H h = 0 with h = [y_i] - pi^*(d_i)
        let base = Fan::projective_space(1).unwrap();
        let degrees = vec![vec![0, 0], vec![1, 0]];
        let (f, data) = projective_bundle(&base, &degrees).unwrap();
        let r = CohRing::new(f).unwrap();
        // h from summand 0 (degree zero): h = [fiber ray 0]
        let h = r.ray_class(data.fiber_ray_ids[0]);
        // pullback of H: same coefficients on the lifted base rays
        let mut coeffs = vec![Rat::zero(); r.fan.num_rays()];
        coeffs[0] = rat(1);
        let big_h = r.divisor_class(&coeffs);
        let rel = r.mul(&h, &h.add(&big_h));
        assert!(rel.is_zero());
        // consistency: h from summand 1 agrees
        let h2 = r
            .ray_class(data.fiber_ray_ids[1])
            .sub(&big_h);
        assert_eq!(h, h2);
    }

    #[test]
    fn pullback_pushforward_blowdown() {
        let p2_fan = Fan::projective_space(2).unwrap();
        let (dp1_fan, e_idx) = p2_fan.star_subdivision(&[0, 1]).unwrap();
        let p2 = CohRing::new(p2_fan).unwrap();
        let dp1 = CohRing::new(dp1_fan).unwrap();
        let pi = ToricMorphism::identity(2);
        // pi_*(1) = 1
        let one = pi.pushforward(&dp1, &p2, &dp1.one()).unwrap();
        assert_eq!(one, p2.one());
        // pi_*[pt] = [pt]
        let pt = pi.pushforward(&dp1, &p2, &dp1.point_class()).unwrap();
        assert_eq!(pt, p2.point_class());
        // projection formula instance: pi_*(pi^* H . E) = H . pi_* E = 0
        let h = p2.ray_class(0);
        let ph = pi.pullback(&dp1, &p2, &h).unwrap();
        let e = dp1.ray_class(e_idx);
        let prod = dp1.mul(&ph, &e);
        let pushed = pi.pushforward(&dp1, &p2, &prod).unwrap();
        assert!(pushed.is_zero());
    }

    #[test]
    fn projection_formula_on_basis() {
        let p2_fan = Fan::projective_space(2).unwrap();
        let (dp1_fan, _) = p2_fan.star_subdivision(&[0, 1]).unwrap();
        let p2 = CohRing::new(p2_fan).unwrap();
        let dp1 = CohRing::new(dp1_fan).unwrap();
        let pi = ToricMorphism::identity(2);
        for i in 0..dp1.total_dim() {
            let mut a = El::zero(&dp1);
            a.0[i] = Rat::one();
            for j in 0..p2.total_dim() {
                let mut b = El::zero(&p2);
                b.0[j] = Rat::one();
                let fb = pi.pullback(&dp1, &p2, &b).unwrap();
                let lhs = pi
                    .pushforward(&dp1, &p2, &dp1.mul(&a, &fb))
                    .unwrap();
                let rhs = p2.mul(&pi.pushforward(&dp1, &p2, &a).unwrap(), &b);
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn associativity_and_commutativity() {
        let p2_fan = Fan::projective_space(2).unwrap();
        let (dp1_fan, _) = p2_fan.star_subdivision(&[0, 1]).unwrap();
        let r = CohRing::new(dp1_fan).unwrap();
        let d = r.total_dim();
        for i in 0..d {
            for j in 0..d {
                let mut a = El::zero(&r);
                a.0[i] = Rat::one();
                let mut b = El::zero(&r);
                b.0[j] = Rat::one();
                assert_eq!(r.mul(&a, &b), r.mul(&b, &a));
                for k in 0..d {
                    let mut c = El::zero(&r);
                    c.0[k] = Rat::one();
                    assert_eq!(
                        r.mul(&r.mul(&a, &b), &c),
                        r.mul(&a, &r.mul(&b, &c))
                    );
                }
            }
        }
    }

    #[test]
    fn orbit_restriction_divisor() {
        // restrict E to itself inside dP1: degree -1 on E = P1... as a class,
        // [E]|_E has integral -1 against the orbit fundamental class? On a
        // curve: integrate([E]|_E) = E.E = -1.
        let p2_fan = Fan::projective_space(2).unwrap();
        let (dp1_fan, e_idx) = p2_fan.star_subdivision(&[0, 1]).unwrap();
        let dp1 = CohRing::new(dp1_fan.clone()).unwrap();
        let orbit = dp1_fan.orbit_fan(&[e_idx], None).unwrap();
        let restr = OrbitRestriction::new(&dp1_fan, orbit).unwrap();
        let e_ring = CohRing::new(restr.orbit.fan.clone()).unwrap();
        let e_class = dp1.ray_class(e_idx);
        let restricted = restr.restrict(&dp1, &e_ring, &e_class);
        assert_eq!(e_ring.integrate(&restricted), rat(-1));
    }

    #[test]
    fn point_ring() {
        let r = CohRing::point();
        assert_eq!(r.total_dim(), 1);
        assert_eq!(r.integrate(&r.one()), rat(1));
    }

    #[test]
    fn novikov_degree_on_dp1() {
        let p2_fan = Fan::projective_space(2).unwrap();
        let (dp1_fan, e_idx) = p2_fan.star_subdivision(&[0, 1]).unwrap();
        let r = CohRing::new(dp1_fan.clone()).unwrap();
        // the exceptional curve class pairs -1 with E; find it among the mori
        // generators and check deg Q^e = 2(e, c1) = 2
        let gens = dp1_fan.mori_generators();
        let e_curve = gens.iter().find(|g| g[e_idx] == rat(-1)).unwrap();
        assert_eq!(r.novikov_degree(e_curve), rat(2));
    }
}
