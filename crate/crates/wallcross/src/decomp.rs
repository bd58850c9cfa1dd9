//! Classical cohomology decomposition of a three-component wall-crossing:
//! the correspondence map phi_2 through the common blowup, the decomposition
//! matrix onto H*(X-), the Poincare pairing identities, and the reference
//! classes s_m, s_{l,i} as restriction triples.

use crate::equivariant::{Component, Triple};
use crate::geometry::{GeometryError, ThreeComponentGeometry};
use crate::linalg::{self, rat, Mat, Rat};
use crate::ring::{CohRing, El, RingError, ToricMorphism};
use num::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DecompError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("decomposition matrix is singular")]
    SingularDecomposition,
    #[error("class cannot be written in the projective-bundle basis")]
    NotInBundleBasis,
}

/// phi_2 = pi_{-,*} . pi_+^* through the common blowup.
pub fn phi2(g: &ThreeComponentGeometry, alpha_plus: &El) -> Result<El, DecompError> {
    let pi = ToricMorphism::identity(g.x_minus().fan.rank);
    let pulled = pi.pullback(&g.x_tilde, g.x_plus(), alpha_plus)?;
    let pushed = pi.pushforward(&g.x_tilde, g.x_minus(), &pulled)?;
    Ok(pushed)
}

/// j_{-,*}: Poincare adjoint of the restriction to P(N_{F0,-}).
pub fn j_minus_pushforward(
    g: &ThreeComponentGeometry,
    class: &El,
) -> Result<El, DecompError> {
    adjoint_pushforward(
        &g.p_minus.ring,
        g.x_minus(),
        |b| Ok(g.p_minus.incl.restrict(g.x_minus(), &g.p_minus.ring, b)),
        class,
    )
}

/// psi_-^*: pullback along the bundle projection P(N_{F0,-}) -> F0.
pub fn psi_minus_pullback(
    g: &ThreeComponentGeometry,
    class: &El,
) -> Result<El, DecompError> {
    Ok(g.p_minus.psi.pullback(&g.p_minus.ring, g.f0(), class)?)
}

pub fn psi_plus_pullback(g: &ThreeComponentGeometry, class: &El) -> Result<El, DecompError> {
    Ok(g.p_plus.psi.pullback(&g.p_plus.ring, g.f0(), class)?)
}

/// Adjoint pushforward along an arbitrary ring map given by its pullback.
fn adjoint_pushforward(
    source: &CohRing,
    target: &CohRing,
    pullback: impl Fn(&El) -> Result<El, DecompError>,
    class: &El,
) -> Result<El, DecompError> {
    let shift = target.dim - source.dim;
    let mut out = El::zero(target);
    for k in 0..=source.dim {
        let part = source.degree_component(class, k);
        if part.is_zero() {
            continue;
        }
        let tdeg = k + shift;
        if tdeg > target.dim {
            continue;
        }
        let t_ids = target.degree_basis_ids(tdeg).to_vec();
        let comp_ids = target.degree_basis_ids(target.dim - tdeg).to_vec();
        let mut rhs = Vec::with_capacity(comp_ids.len());
        for &bj in &comp_ids {
            let mut b = El::zero(target);
            b.0[bj] = Rat::one();
            let fb = pullback(&b)?;
            rhs.push(source.poincare_pair(&part, &fb));
        }
        let pm = pairing_matrix(target, tdeg);
        let coords =
            linalg::solve_unique(&pm, &rhs).ok_or(DecompError::SingularDecomposition)?;
        for (i, &ti) in t_ids.iter().enumerate() {
            out.0[ti] = &out.0[ti] + &coords[i];
        }
    }
    Ok(out)
}

fn pairing_matrix(ring: &CohRing, deg: usize) -> Mat {
    let a = ring.degree_basis_ids(deg).to_vec();
    let b = ring.degree_basis_ids(ring.dim - deg).to_vec();
    let mut m = Mat::zeros(a.len(), b.len());
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            let mut x = El::zero(ring);
            x.0[ai] = Rat::one();
            let mut y = El::zero(ring);
            y.0[bj] = Rat::one();
            m[(i, j)] = ring.poincare_pair(&x, &y);
        }
    }
    m
}

/// Provenance of a column of the decomposition matrix.
#[derive(Clone, Debug, PartialEq)]
pub enum ColumnSource {
    /// phi_2 of the m-th basis element of H*(X+)
    FromXPlus { m: usize, degree: usize },
    /// j_{-,*}(h^l psi^*(alpha_i)) for the i-th basis element of H*(F0)
    FromWall { l: usize, i: usize, degree: usize },
}

pub struct DecompositionMatrix {
    /// columns in H*(X-) coordinates
    pub columns: Vec<El>,
    pub sources: Vec<ColumnSource>,
    pub matrix: Mat,
    pub invertible: bool,
}

/// The full basis {phi_2(alpha_{X+,m})} + {j_{-,*}(h^l psi^* alpha_{F0,i})}
/// expressed on the monomial basis of H*(X-).
pub fn decomposition_map(
    g: &ThreeComponentGeometry,
) -> Result<DecompositionMatrix, DecompError> {
    let xp = g.x_plus();
    let xm = g.x_minus();
    let f0 = g.f0();
    let c_abs = (-g.c_f0) as usize;
    let r_plus = g.f_zero.r_plus() as usize;
    let mut columns = Vec::new();
    let mut sources = Vec::new();
    for m in 0..xp.total_dim() {
        let mut alpha = El::zero(xp);
        alpha.0[m] = Rat::one();
        let img = phi2(g, &alpha)?;
        let degree = xp.basis_deg[m];
        if xm.is_homogeneous(&img) != Some(degree) && !img.is_zero() {
            return Err(DecompError::SingularDecomposition);
        }
        columns.push(img);
        sources.push(ColumnSource::FromXPlus { m, degree });
    }
    let h = &g.p_minus.h;
    for l in 0..c_abs {
        let hl = g.p_minus.ring.pow(h, l);
        for i in 0..f0.total_dim() {
            let mut beta = El::zero(f0);
            beta.0[i] = Rat::one();
            let lifted = psi_minus_pullback(g, &beta)?;
            let prod = g.p_minus.ring.mul(&hl, &lifted);
            let img = j_minus_pushforward(g, &prod)?;
            let degree = f0.basis_deg[i] + l + r_plus;
            columns.push(img);
            sources.push(ColumnSource::FromWall { l, i, degree });
        }
    }
    if columns.len() != xm.total_dim() {
        return Err(DecompError::SingularDecomposition);
    }
    let matrix = Mat::from_rows(columns.iter().map(|c| c.0.clone()).collect());
    let invertible = matrix.rank() == xm.total_dim();
    if !invertible {
        return Err(DecompError::SingularDecomposition);
    }
    Ok(DecompositionMatrix {
        columns,
        sources,
        matrix,
        invertible,
    })
}

#[derive(Debug)]
pub struct PairingCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// The three pairing identities over full bases.
pub fn pairing_identities_check(
    g: &ThreeComponentGeometry,
) -> Result<Vec<PairingCheck>, DecompError> {
    let xp = g.x_plus();
    let xm = g.x_minus();
    let f0 = g.f0();
    let c_abs = (-g.c_f0) as usize;
    let r_plus = g.f_zero.r_plus();
    let mut checks = Vec::new();

    // phi_2 images and wall images, precomputed
    let phi_images: Vec<El> = (0..xp.total_dim())
        .map(|m| {
            let mut a = El::zero(xp);
            a.0[m] = Rat::one();
            phi2(g, &a)
        })
        .collect::<Result<_, _>>()?;
    let mut wall_images: Vec<Vec<El>> = Vec::new(); // [l][i]
    for l in 0..c_abs {
        let hl = g.p_minus.ring.pow(&g.p_minus.h, l);
        let mut row = Vec::new();
        for i in 0..f0.total_dim() {
            let mut beta = El::zero(f0);
            beta.0[i] = Rat::one();
            let lifted = psi_minus_pullback(g, &beta)?;
            row.push(j_minus_pushforward(g, &g.p_minus.ring.mul(&hl, &lifted))?);
        }
        wall_images.push(row);
    }

    let mut ok1 = true;
    let mut detail1 = String::new();
    for m1 in 0..xp.total_dim() {
        for m2 in 0..xp.total_dim() {
            let mut a1 = El::zero(xp);
            a1.0[m1] = Rat::one();
            let mut a2 = El::zero(xp);
            a2.0[m2] = Rat::one();
            let lhs = xm.poincare_pair(&phi_images[m1], &phi_images[m2]);
            let rhs = xp.poincare_pair(&a1, &a2);
            if lhs != rhs {
                ok1 = false;
                detail1 = format!("fails at basis pair ({m1},{m2})");
            }
        }
    }
    checks.push(PairingCheck {
        name: "phi2_preserves_pairing".into(),
        passed: ok1,
        detail: detail1,
    });

    let mut ok2 = true;
    let mut detail2 = String::new();
    for (m, phi) in phi_images.iter().enumerate() {
        for (l, row) in wall_images.iter().enumerate() {
            for (i, w) in row.iter().enumerate() {
                if !xm.poincare_pair(phi, w).is_zero() {
                    ok2 = false;
                    detail2 = format!("fails at (m={m}, l={l}, i={i})");
                }
            }
        }
    }
    checks.push(PairingCheck {
        name: "phi2_orthogonal_to_wall".into(),
        passed: ok2,
        detail: detail2,
    });

    let sign = if r_plus % 2 == 0 { Rat::one() } else { -Rat::one() };
    let mut ok3 = true;
    let mut detail3 = String::new();
    for l1 in 0..c_abs {
        for l2 in 0..c_abs {
            for i1 in 0..f0.total_dim() {
                for i2 in 0..f0.total_dim() {
                    let lhs = xm.poincare_pair(&wall_images[l1][i1], &wall_images[l2][i2]);
                    if l1 + l2 < c_abs - 1 {
                        if !lhs.is_zero() {
                            ok3 = false;
                            detail3 = format!("nonzero below top at ({l1},{l2},{i1},{i2})");
                        }
                    } else if l1 + l2 == c_abs - 1 {
                        let mut b1 = El::zero(f0);
                        b1.0[i1] = Rat::one();
                        let mut b2 = El::zero(f0);
                        b2.0[i2] = Rat::one();
                        let rhs = &sign * f0.poincare_pair(&b1, &b2);
                        if lhs != rhs {
                            ok3 = false;
                            detail3 = format!("top pairing mismatch at ({l1},{l2},{i1},{i2})");
                        }
                    }
                }
            }
        }
    }
    checks.push(PairingCheck {
        name: "wall_pairing_triangular".into(),
        passed: ok3,
        detail: detail3,
    });
    Ok(checks)
}

/// Expand a class on P(N_{F0,+-}) in the bundle basis psi^*(beta) h^i,
/// 0 <= i < rank. Returns the coefficients beta_i on the wall.
pub fn bundle_expansion(
    g: &ThreeComponentGeometry,
    side_plus: bool,
    class: &El,
) -> Result<Vec<El>, DecompError> {
    let (locus, rank) = if side_plus {
        (&g.p_plus, g.f_zero.r_plus() as usize)
    } else {
        (&g.p_minus, g.f_zero.r_minus() as usize)
    };
    let f0 = g.f0();
    let mut cols: Vec<El> = Vec::new();
    for i in 0..rank {
        let hi = locus.ring.pow(&locus.h, i);
        for j in 0..f0.total_dim() {
            let mut b = El::zero(f0);
            b.0[j] = Rat::one();
            let lifted = locus.psi.pullback(&locus.ring, f0, &b)?;
            cols.push(locus.ring.mul(&hi, &lifted));
        }
    }
    let mat = Mat::from_rows(crate::fan::transpose(
        &cols.iter().map(|c| c.0.clone()).collect::<Vec<_>>(),
    ));
    let sol = linalg::solve(&mat, &class.0).ok_or(DecompError::NotInBundleBasis)?;
    if mat.mul_vec(&sol) != class.0 {
        return Err(DecompError::NotInBundleBasis);
    }
    let n0 = f0.total_dim();
    let mut out = Vec::new();
    for i in 0..rank {
        out.push(El(sol[i * n0..(i + 1) * n0].to_vec()));
    }
    Ok(out)
}

/// The exceptional-restriction rule: j_-^*(phi_2(alpha)) = f(-h_-) where
/// f(h_+) = j_+^*(alpha). Checked on one class.
pub fn exceptional_rule_holds(
    g: &ThreeComponentGeometry,
    alpha_plus: &El,
) -> Result<bool, DecompError> {
    let restricted_plus = g
        .p_plus
        .incl
        .restrict(g.x_plus(), &g.p_plus.ring, alpha_plus);
    let f = bundle_expansion(g, true, &restricted_plus)?;
    let phi = phi2(g, alpha_plus)?;
    let restricted_minus = g
        .p_minus
        .incl
        .restrict(g.x_minus(), &g.p_minus.ring, &phi);
    // f(-h_-)
    let mut expect = El::zero(&g.p_minus.ring);
    let mut hpow = g.p_minus.ring.one();
    for (i, beta) in f.iter().enumerate() {
        let lifted = psi_minus_pullback(g, beta)?;
        let sign = if i % 2 == 0 { Rat::one() } else { -Rat::one() };
        expect = expect.add(&g.p_minus.ring.mul(&hpow, &lifted).scale(&sign));
        hpow = g.p_minus.ring.mul(&hpow, &g.p_minus.h);
    }
    Ok(restricted_minus == expect)
}

/// Reference classes of the wall-crossing, emitted as restriction triples.
pub struct ReferenceBasis {
    /// s_m, indexed by the basis of H*(X+)
    pub s_upper: Vec<Triple>,
    /// s_{l,i}, indexed by (l, i)
    pub s_wall: Vec<((usize, usize), Triple)>,
}

/// Build the reference classes:
/// - s_m restricts to the canonical lambda-free lift of alpha_{X+,m} at F+,
///   of phi_2(alpha_{X+,m}) at F-, and to the polynomial f(lambda) of degree
///   < r_{F0,+} determined by j_+^*(alpha) = f(h_+) at F0;
/// - s_{l,i} restricts to 0 at F+, to e_lam(N_{F0,+}) lam^l alpha_{F0,i} at
///   F0, and to the lambda-free lift of j_{-,*}(h^l psi^* alpha_{F0,i}) at F-.
pub fn reference_basis(g: &ThreeComponentGeometry) -> Result<ReferenceBasis, DecompError> {
    let xp = g.x_plus();
    let f0 = g.f0();
    let c_abs = (-g.c_f0) as usize;
    let mut s_upper = Vec::new();
    for m in 0..xp.total_dim() {
        let mut alpha = El::zero(xp);
        alpha.0[m] = Rat::one();
        let phi = phi2(g, &alpha)?;
        let restricted = g
            .p_plus
            .incl
            .restrict(xp, &g.p_plus.ring, &alpha);
        let f = bundle_expansion(g, true, &restricted)?;
        let mut zero_comp = Component::zero();
        for (i, beta) in f.iter().enumerate() {
            zero_comp = zero_comp.add(&Component::monomial(beta.clone(), i as u32, 0), f0);
        }
        s_upper.push(Triple {
            plus: Component::from_class(alpha),
            zero: zero_comp,
            minus: Component::from_class(phi),
        });
    }
    let mut s_wall = Vec::new();
    for l in 0..c_abs {
        let hl = g.p_minus.ring.pow(&g.p_minus.h, l);
        for i in 0..f0.total_dim() {
            let mut beta = El::zero(f0);
            beta.0[i] = Rat::one();
            let lifted = psi_minus_pullback(g, &beta)?;
            let img = j_minus_pushforward(g, &g.p_minus.ring.mul(&hl, &lifted))?;
            let zero_comp = Component::monomial(beta, l as u32, 0).mul_euler(
                &crate::equivariant::euler_f0(g, true, 1, 0),
                f0,
            );
            s_wall.push((
                (l, i),
                Triple {
                    plus: Component::zero(),
                    zero: zero_comp,
                    minus: Component::from_class(img),
                },
            ));
        }
    }
    Ok(ReferenceBasis { s_upper, s_wall })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equivariant::{kirwan_map, zseries_is_zero};
    use crate::fan::Fan;
    use crate::geometry::{build_blowup_geometry, build_local_model_geometry, Side};

    fn blowup_p2() -> ThreeComponentGeometry {
        build_blowup_geometry(&Fan::projective_space(2).unwrap(), &[0, 1]).unwrap()
    }

    fn local_pt_2_3() -> ThreeComponentGeometry {
        build_local_model_geometry(
            &Fan::point(),
            &[vec![], vec![]],
            &[vec![], vec![], vec![]],
        )
        .unwrap()
    }

    #[test]
    fn phi2_unit_and_pairing() {
        let g = blowup_p2();
        // phi2(1) = 1
        let one = phi2(&g, &g.x_plus().one()).unwrap();
        assert_eq!(one, g.x_minus().one());
        // integral of phi2(H)^2 over dP1 equals integral of H^2 over P2 = 1
        let h = g.x_plus().ray_class(0);
        let img = phi2(&g, &h).unwrap();
        assert_eq!(
            g.x_minus().integrate(&g.x_minus().mul(&img, &img)),
            rat(1)
        );
        // and phi2(H) . [E] = 0
        let e = g.p_minus_class();
        assert!(g.x_minus().poincare_pair(&img, &e).is_zero());
    }

    #[test]
    fn decomposition_sizes() {
        let g = blowup_p2();
        let d = decomposition_map(&g).unwrap();
        assert!(d.invertible);
        assert_eq!(d.columns.len(), 4); // 3 + 1*1

        let g = local_pt_2_3();
        let d = decomposition_map(&g).unwrap();
        assert!(d.invertible);
        assert_eq!(d.columns.len(), 9); // 8 + 1*1
    }

    #[test]
    fn pairing_identities_blowup() {
        let g = blowup_p2();
        let checks = pairing_identities_check(&g).unwrap();
        for c in &checks {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
        // the P2-pt instance: integral of E^2 = -1 = (-1)^{r_{F0,+}}
        let e = g.p_minus_class();
        assert_eq!(g.x_minus().integrate(&g.x_minus().mul(&e, &e)), rat(-1));
    }

    #[test]
    fn exceptional_rule_all_basis() {
        for g in [blowup_p2(), local_pt_2_3()] {
            for m in 0..g.x_plus().total_dim() {
                let mut alpha = El::zero(g.x_plus());
                alpha.0[m] = Rat::one();
                assert!(exceptional_rule_holds(&g, &alpha).unwrap(), "m = {m}");
            }
        }
    }

    #[test]
    fn reference_basis_kirwan_images() {
        let g = blowup_p2();
        let rb = reference_basis(&g).unwrap();
        // kappa_{X+}(s_m) is the basis element, kappa_{X-}(s_m) = phi2 image
        for (m, s) in rb.s_upper.iter().enumerate() {
            let img_plus = kirwan_map(&g, s, Side::Plus).unwrap();
            let mut expect = El::zero(g.x_plus());
            expect.0[m] = Rat::one();
            assert_eq!(img_plus.get(&0), Some(&expect));
            let img_minus = kirwan_map(&g, s, Side::Minus).unwrap();
            let phi = phi2(&g, &expect).unwrap();
            assert_eq!(img_minus.get(&0), Some(&phi));
        }
        // kappa_{X+}(s_{l,i}) = 0 and kappa_{X-}(s_{l,i}) = wall image
        for ((l, i), s) in &rb.s_wall {
            let img_plus = kirwan_map(&g, s, Side::Plus).unwrap();
            assert!(zseries_is_zero(&img_plus), "({l},{i})");
            let img_minus = kirwan_map(&g, s, Side::Minus).unwrap();
            assert!(!zseries_is_zero(&img_minus));
        }
    }

    #[test]
    fn reference_f0_restrictions() {
        // (P2, pt): s_m for alpha = 1 restricts to 1 on F0; for alpha = H it
        // restricts to 0; s_{0,0} restricts to e_lam(N_{F0,+}) = lam.
        let g = blowup_p2();
        let rb = reference_basis(&g).unwrap();
        let s1 = &rb.s_upper[0];
        assert_eq!(
            s1.zero.num.get(&(0, 0)),
            Some(&g.f0().one()),
            "unit restricts to 1"
        );
        let sh = &rb.s_upper[1];
        assert!(sh.zero.is_zero(), "H restricts to 0 on the wall point");
        let s00 = &rb.s_wall[0].1;
        assert_eq!(s00.zero.num.get(&(1, 0)), Some(&g.f0().one()));
        assert_eq!(s00.zero.num.len(), 1);
    }

    #[test]
    fn wall_reference_lambda_degree_bound() {
        // deg_lam(s_{l,i}|_{F0}) = l + r_{F0,+} <= r_{F0,-} - 1
        for g in [blowup_p2(), local_pt_2_3()] {
            let rb = reference_basis(&g).unwrap();
            let bound = g.f_zero.r_minus() as u32 - 1;
            for ((l, i), s) in &rb.s_wall {
                let deg = s.zero.lambda_degree().unwrap();
                assert_eq!(deg, *l as u32 + g.f_zero.r_plus() as u32);
                assert!(deg <= bound, "({l},{i})");
            }
        }
    }
}
