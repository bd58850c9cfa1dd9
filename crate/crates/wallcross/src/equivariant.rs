//! Equivariant classes as restriction triples, shift operators via the
//! localization formulas at the three fixed components, and the leading-term
//! operator on Novikov series.
//!
//! Each component restriction is a fraction num / prod (eps lam + m z) where
//! the numerator is a polynomial in lam with z-Laurent coefficients in H*(F)
//! and every denominator factor is the scalar part of an implemented Euler
//! factor; nilpotent parts of inverted Euler classes are expanded into the
//! numerator, so the denominators stay scalar and cancellation is exact
//! polynomial division. z is an exact Laurent variable throughout.

use crate::geometry::{EqCurve, GeometryError, Side, ThreeComponentGeometry};
use crate::linalg::{self, rat, Mat, Rat};
use crate::ring::{CohRing, El};
use num::{One, Signed, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EquivError {
    #[error("restriction is not regular at lambda = 0 (uncancelled eps*lam factor)")]
    NonRegular,
    #[error("negative Novikov support at exponent {0:?}")]
    NegativeSupport(String),
    #[error("truncation bound too small for the shift prefactors")]
    TruncationOverflow,
    #[error("discrete transform support violates the dual ample cone at {0:?}")]
    SupportViolation(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// z-Laurent series with ring coefficients (finitely many terms).
pub type ZSeries = BTreeMap<i64, El>;

pub fn zseries_is_zero(s: &ZSeries) -> bool {
    s.values().all(|e| e.is_zero())
}

pub fn zseries_normalize(mut s: ZSeries) -> ZSeries {
    s.retain(|_, e| !e.is_zero());
    s
}

/// One component restriction: numerator in H*(F)[lam][z,z^-1], denominator a
/// multiset of scalar factors (eps lam + m z).
#[derive(Clone, Debug, PartialEq)]
pub struct Component {
    /// (lam exponent, z exponent) -> class
    pub num: BTreeMap<(u32, i64), El>,
    /// (eps, m) -> multiplicity; eps in {+1, -1}
    pub den: BTreeMap<(i8, i64), u32>,
}

impl Component {
    pub fn zero() -> Component {
        Component {
            num: BTreeMap::new(),
            den: BTreeMap::new(),
        }
    }

    pub fn from_class(e: El) -> Component {
        let mut num = BTreeMap::new();
        if !e.is_zero() {
            num.insert((0, 0), e);
        }
        Component {
            num,
            den: BTreeMap::new(),
        }
    }

    /// polynomial c * lam^a z^b
    pub fn monomial(e: El, a: u32, b: i64) -> Component {
        let mut num = BTreeMap::new();
        if !e.is_zero() {
            num.insert((a, b), e);
        }
        Component {
            num,
            den: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.values().all(|e| e.is_zero())
    }

    fn num_insert(num: &mut BTreeMap<(u32, i64), El>, key: (u32, i64), e: El) {
        match num.get_mut(&key) {
            Some(x) => *x = x.add(&e),
            None => {
                num.insert(key, e);
            }
        }
    }

    fn cleaned(mut self) -> Component {
        self.num.retain(|_, e| !e.is_zero());
        if self.num.is_empty() {
            self.den.clear();
        }
        self
    }

    /// Multiply the numerator by the scalar factor (eps lam + m z).
    fn num_mul_linear(&mut self, eps: i8, m: i64) {
        let mut out: BTreeMap<(u32, i64), El> = BTreeMap::new();
        for (&(a, b), e) in &self.num {
            Self::num_insert(&mut out, (a + 1, b), e.scale(&rat(eps as i64)));
            if m != 0 {
                Self::num_insert(&mut out, (a, b + 1), e.scale(&rat(m)));
            }
        }
        out.retain(|_, e| !e.is_zero());
        self.num = out;
    }

    /// Exact division of the numerator by (eps lam + m z); None if it does
    /// not divide.
    fn num_div_linear(&self, eps: i8, m: i64, ring: &CohRing) -> Option<BTreeMap<(u32, i64), El>> {
        // Treat as a polynomial in lam with ZSeries coefficients and divide
        // synthetically: num = (eps lam + m z) q + r.
        let max_lam = self.num.keys().map(|&(a, _)| a).max().unwrap_or(0);
        let mut coeffs: Vec<ZSeries> = vec![BTreeMap::new(); max_lam as usize + 1];
        for (&(a, b), e) in &self.num {
            coeffs[a as usize].insert(b, e.clone());
        }
        let epsr = rat(eps as i64);
        let mut quot: Vec<ZSeries> = vec![BTreeMap::new(); max_lam as usize];
        let mut carry: ZSeries = BTreeMap::new();
        for a in (1..=max_lam as usize).rev() {
            // current lam^a coefficient = coeffs[a] + carry
            let mut cur = coeffs[a].clone();
            for (b, e) in &carry {
                let entry = cur.entry(*b).or_insert_with(|| El::zero(ring));
                *entry = entry.add(e);
            }
            // q_{a-1} = cur / eps
            let q: ZSeries = cur
                .iter()
                .map(|(b, e)| (*b, e.scale(&(Rat::one() / &epsr))))
                .collect();
            // carry to lam^{a-1}: -(m z) * q / ... subtract m z q from coeffs
            let mut nc: ZSeries = BTreeMap::new();
            if m != 0 {
                for (b, e) in &q {
                    nc.insert(b + 1, e.scale(&rat(-m)));
                }
            }
            quot[a - 1] = q;
            carry = nc;
        }
        // remainder = coeffs[0] + carry must vanish
        let mut rem = coeffs[0].clone();
        for (b, e) in &carry {
            let entry = rem.entry(*b).or_insert_with(|| El::zero(ring));
            *entry = entry.add(e);
        }
        if !zseries_is_zero(&rem) {
            return None;
        }
        let mut out = BTreeMap::new();
        for (a, zs) in quot.into_iter().enumerate() {
            for (b, e) in zs {
                if !e.is_zero() {
                    out.insert((a as u32, b), e);
                }
            }
        }
        Some(out)
    }

    /// Cancel denominator factors that divide the numerator exactly.
    pub fn normalize(mut self, ring: &CohRing) -> Component {
        if self.is_zero() {
            return Component::zero();
        }
        let keys: Vec<(i8, i64)> = self.den.keys().cloned().collect();
        for key in keys {
            while self.den.get(&key).map_or(0, |&k| k) > 0 {
                match self.num_div_linear(key.0, key.1, ring) {
                    Some(newnum) => {
                        self.num = newnum;
                        let k = self.den.get_mut(&key).unwrap();
                        *k -= 1;
                        if *k == 0 {
                            self.den.remove(&key);
                        }
                    }
                    None => break,
                }
            }
        }
        self.cleaned()
    }

    pub fn add(&self, other: &Component, ring: &CohRing) -> Component {
        // common denominator: union with max multiplicities
        let mut den: BTreeMap<(i8, i64), u32> = self.den.clone();
        for (k, &v) in &other.den {
            let e = den.entry(*k).or_insert(0);
            *e = (*e).max(v);
        }
        let mut a = self.clone();
        let mut b = other.clone();
        for (k, &v) in &den {
            let va = self.den.get(k).cloned().unwrap_or(0);
            let vb = other.den.get(k).cloned().unwrap_or(0);
            for _ in va..v {
                a.num_mul_linear(k.0, k.1);
            }
            for _ in vb..v {
                b.num_mul_linear(k.0, k.1);
            }
        }
        let mut num = a.num;
        for (k, e) in b.num {
            Self::num_insert(&mut num, k, e);
        }
        Component { num, den }.normalize(ring)
    }

    pub fn scale(&self, c: &Rat) -> Component {
        if c.is_zero() {
            return Component::zero();
        }
        Component {
            num: self
                .num
                .iter()
                .map(|(k, e)| (*k, e.scale(c)))
                .collect(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &Component, ring: &CohRing) -> Component {
        let mut num: BTreeMap<(u32, i64), El> = BTreeMap::new();
        for (&(a1, b1), e1) in &self.num {
            for (&(a2, b2), e2) in &other.num {
                let p = ring.mul(e1, e2);
                if !p.is_zero() {
                    Self::num_insert(&mut num, (a1 + a2, b1 + b2), p);
                }
            }
        }
        let mut den = self.den.clone();
        for (k, v) in &other.den {
            *den.entry(*k).or_insert(0) += v;
        }
        Component { num, den }.normalize(ring)
    }

    /// e^{-k z d/d lam}: substitute lam -> lam - k z.
    pub fn shift_lambda(&self, k: i64) -> Component {
        if k == 0 {
            return self.clone();
        }
        let mut num: BTreeMap<(u32, i64), El> = BTreeMap::new();
        for (&(a, b), e) in &self.num {
            // (lam - k z)^a
            let mut binom = Rat::one();
            for j in 0..=a {
                // C(a, j) lam^j (-k z)^{a-j}
                let pow = (a - j) as i64;
                let coeff = &binom * rat(-k).pow(pow as i32);
                let t = e.scale(&coeff);
                if !t.is_zero() {
                    Self::num_insert(&mut num, (j, b + pow), t);
                }
                // update C(a, j+1) = C(a, j) * (a - j) / (j + 1)
                binom = binom * rat((a - j) as i64) / rat((j + 1) as i64);
            }
        }
        num.retain(|_, e| !e.is_zero());
        let den = self
            .den
            .iter()
            .map(|(&(eps, m), &v)| ((eps, m - (eps as i64) * k), v))
            .collect();
        Component { num, den }
    }

    /// Multiply by the equivariant Euler class prod_i (eps lam + m z + d_i).
    pub fn mul_euler(&self, factors: &[(i8, i64, El)], ring: &CohRing) -> Component {
        let mut out = self.clone();
        for (eps, m, delta) in factors {
            let mut lin = out.clone();
            lin.num_mul_linear(*eps, *m);
            let with_delta = out.mul(&Component::from_class(delta.clone()), ring);
            out = lin.add(&with_delta, ring);
        }
        out.normalize(ring)
    }

    /// Divide by the equivariant Euler class: nilpotent parts are expanded
    /// into the numerator, the scalar parts join the denominator.
    pub fn div_euler(&self, factors: &[(i8, i64, El)], ring: &CohRing) -> Component {
        let mut out = self.clone();
        for (eps, m, delta) in factors {
            // 1/(s + d) = sum_t (-1)^t d^t / s^{t+1}, s = eps lam + m z
            let kmax = ring.dim + 1; // nilpotency bound
            let mut acc = Component::zero();
            let mut dpow = ring.one();
            for t in 0..kmax {
                let mut term = out.mul(&Component::from_class(dpow.clone()), ring);
                if t % 2 == 1 {
                    term = term.scale(&-Rat::one());
                }
                // multiply remaining s-power to put over common denominator s^kmax
                for _ in 0..(kmax - 1 - t) {
                    term.num_mul_linear(*eps, *m);
                }
                acc = acc.add(&term, ring);
                dpow = ring.mul(&dpow, delta);
                if dpow.is_zero() {
                    break;
                }
            }
            *acc.den.entry((*eps, *m)).or_insert(0) += kmax as u32;
            out = acc.normalize(ring);
        }
        out
    }

    /// Substitute lam by a nilpotent degree-one class; inverts remaining
    /// denominator factors as z-Laurent series. Fails if a pure-lam factor
    /// (m = 0) survives normalization.
    pub fn eval_at(&self, value: &El, ring: &CohRing) -> Result<ZSeries, EquivError> {
        let c = self.clone().normalize(ring);
        let mut out: ZSeries = BTreeMap::new();
        // numerator: substitute
        let mut powers: Vec<El> = vec![ring.one()];
        let max_lam = c.num.keys().map(|&(a, _)| a).max().unwrap_or(0);
        for _ in 0..max_lam {
            let last = powers.last().unwrap();
            powers.push(ring.mul(last, value));
        }
        for (&(a, b), e) in &c.num {
            let t = ring.mul(e, &powers[a as usize]);
            if !t.is_zero() {
                let entry = out.entry(b).or_insert_with(|| El::zero(ring));
                *entry = entry.add(&t);
            }
        }
        // denominator factors
        for (&(eps, m), &mult) in &c.den {
            if m == 0 {
                if zseries_is_zero(&out) {
                    return Ok(BTreeMap::new());
                }
                return Err(EquivError::NonRegular);
            }
            for _ in 0..mult {
                // (eps v + m z)^{-1} = sum_t (-eps)^t v^t (m z)^{-(t+1)}
                let mut next: ZSeries = BTreeMap::new();
                for (b, e) in &out {
                    let mut vpow = ring.one();
                    for t in 0..=ring.dim {
                        let sign = if t % 2 == 1 { -Rat::one() } else { Rat::one() };
                        let coeff = sign
                            * rat(eps as i64).pow(t as i32)
                            / rat(m).pow((t + 1) as i32);
                        let term = ring.mul(e, &vpow).scale(&coeff);
                        if !term.is_zero() {
                            let key = b - (t as i64 + 1);
                            let entry = next.entry(key).or_insert_with(|| El::zero(ring));
                            *entry = entry.add(&term);
                        }
                        vpow = ring.mul(&vpow, value);
                        if vpow.is_zero() {
                            break;
                        }
                    }
                }
                out = zseries_normalize(next);
            }
        }
        Ok(zseries_normalize(out))
    }

    /// The coefficient of lam^n z^0 style access: the numerator as a lam
    /// polynomial (only valid when the denominator is empty).
    pub fn as_polynomial(&self) -> Option<&BTreeMap<(u32, i64), El>> {
        if self.den.is_empty() {
            Some(&self.num)
        } else {
            None
        }
    }

    pub fn lambda_degree(&self) -> Option<u32> {
        self.num.keys().map(|&(a, _)| a).max()
    }
}

/// Restriction triple: components at F+, F0, F-.
#[derive(Clone, Debug, PartialEq)]
pub struct Triple {
    pub plus: Component,
    pub zero: Component,
    pub minus: Component,
}

impl Triple {
    pub fn zero_class() -> Triple {
        Triple {
            plus: Component::zero(),
            zero: Component::zero(),
            minus: Component::zero(),
        }
    }

    pub fn one(g: &ThreeComponentGeometry) -> Triple {
        Triple {
            plus: Component::from_class(g.f_plus.ring.one()),
            zero: Component::from_class(g.f_zero.ring.one()),
            minus: Component::from_class(g.f_minus.ring.one()),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.plus.is_zero() && self.zero.is_zero() && self.minus.is_zero()
    }

    pub fn add(&self, other: &Triple, g: &ThreeComponentGeometry) -> Triple {
        Triple {
            plus: self.plus.add(&other.plus, &g.f_plus.ring),
            zero: self.zero.add(&other.zero, &g.f_zero.ring),
            minus: self.minus.add(&other.minus, &g.f_minus.ring),
        }
    }

    pub fn scale(&self, c: &Rat) -> Triple {
        Triple {
            plus: self.plus.scale(c),
            zero: self.zero.scale(c),
            minus: self.minus.scale(c),
        }
    }

    pub fn mul(&self, other: &Triple, g: &ThreeComponentGeometry) -> Triple {
        Triple {
            plus: self.plus.mul(&other.plus, &g.f_plus.ring),
            zero: self.zero.mul(&other.zero, &g.f_zero.ring),
            minus: self.minus.mul(&other.minus, &g.f_minus.ring),
        }
    }

    /// i_{F-,*}: the triple supported at F- with an e_lam(N_{F-/W}) factor.
    pub fn push_from_minus(comp: Component, g: &ThreeComponentGeometry) -> Triple {
        Triple {
            plus: Component::zero(),
            zero: Component::zero(),
            minus: comp.mul_euler(&euler_minus_normal(g, 0), &g.f_minus.ring),
        }
    }

    /// i_{F+,*}: supported at F+ with the e_{-lam}(N_{F+/W}) factor.
    pub fn push_from_plus(comp: Component, g: &ThreeComponentGeometry) -> Triple {
        Triple {
            plus: comp.mul_euler(&euler_plus_normal(g, 0), &g.f_plus.ring),
            zero: Component::zero(),
            minus: Component::zero(),
        }
    }
}

/// Euler factor lists for the four normal bundles in play. The shift m adds
/// m z to each linear factor.
pub fn euler_minus_normal(g: &ThreeComponentGeometry, m: i64) -> Vec<(i8, i64, El)> {
    vec![(1, m, g.rho_minus.clone())]
}

pub fn euler_plus_normal(g: &ThreeComponentGeometry, m: i64) -> Vec<(i8, i64, El)> {
    vec![(-1, m, g.rho_plus.clone())]
}

pub fn euler_f0(
    g: &ThreeComponentGeometry,
    weight_plus_part: bool,
    sign: i8,
    m: i64,
) -> Vec<(i8, i64, El)> {
    let degs = if weight_plus_part {
        &g.f_zero.plus_degrees
    } else {
        &g.f_zero.minus_degrees
    };
    degs.iter().map(|d| (sign, m, d.clone())).collect()
}

/// The operation of the spec: prod_i (sign lam + m z + delta_i) as a
/// denominator-free component over the carrying ring.
pub fn equivariant_euler(degrees: &[El], sign: i8, m: i64, ring: &CohRing) -> Component {
    let factors: Vec<(i8, i64, El)> = degrees.iter().map(|d| (sign, m, d.clone())).collect();
    Component::from_class(ring.one()).mul_euler(&factors, ring)
}

/// Formal series over the equivariant curve monoid with triple coefficients.
/// Exponents are beta + lam * lambda^*; the N1(W) part of the rewritten
/// (Q_W, S_{F0}) pair is bounded by the omega pairing.
#[derive(Clone, Debug)]
pub struct TripleSeries {
    pub terms: BTreeMap<EqCurve, Triple>,
    pub qbound: Rat,
}

impl TripleSeries {
    pub fn from_triple(g: &ThreeComponentGeometry, t: Triple, qbound: Rat) -> TripleSeries {
        let mut terms = BTreeMap::new();
        terms.insert(EqCurve::zero(g.w_fan.num_rays()), t);
        TripleSeries { terms, qbound }
    }

    pub fn constant_one(g: &ThreeComponentGeometry, qbound: Rat) -> TripleSeries {
        Self::from_triple(g, Triple::one(g), qbound)
    }

    fn insert(&mut self, g: &ThreeComponentGeometry, exp: EqCurve, t: Triple) {
        if t.is_zero() {
            return;
        }
        if q_part_pairing(g, &exp) > self.qbound {
            return; // truncated away
        }
        match self.terms.get_mut(&exp) {
            Some(x) => {
                *x = x.add(&t, g);
                if x.is_zero() {
                    self.terms.remove(&exp);
                }
            }
            None => {
                self.terms.insert(exp, t);
            }
        }
    }

    /// Multiply by the Novikov monomial of an equivariant curve class.
    pub fn mul_monomial(&self, g: &ThreeComponentGeometry, mu: &EqCurve) -> TripleSeries {
        let mut out = TripleSeries {
            terms: BTreeMap::new(),
            qbound: self.qbound.clone(),
        };
        for (exp, t) in &self.terms {
            out.insert(g, exp.add(mu), t.clone());
        }
        out
    }

    pub fn add(&self, g: &ThreeComponentGeometry, other: &TripleSeries) -> TripleSeries {
        let mut out = self.clone();
        out.qbound = out.qbound.min(other.qbound.clone());
        for (exp, t) in &other.terms {
            out.insert(g, exp.clone(), t.clone());
        }
        out
    }
}

/// omega pairing of the Q_W part (beta + lam * a) of an exponent.
pub fn q_part_pairing(g: &ThreeComponentGeometry, exp: &EqCurve) -> Rat {
    let mut total = Rat::zero();
    for (i, w) in g.omega.iter().enumerate() {
        total += w * &(&exp.beta[i] + &exp.lam * &g.a[i]);
    }
    total
}

/// Is the Q_W part of the exponent effective (inside the Mori cone)?
pub fn q_part_effective(g: &ThreeComponentGeometry, exp: &EqCurve) -> bool {
    let q: Vec<Rat> = (0..g.w_fan.num_rays())
        .map(|i| &exp.beta[i] + &exp.lam * &g.a[i])
        .collect();
    if q.iter().all(|x| x.is_zero()) {
        return true;
    }
    let cols = crate::fan::transpose(&g.w_mori);
    linalg::in_cone(&Mat::from_rows(cols), &q)
}

/// The S_{F0} exponent of a pure wall monomial; None when the Q_W part is
/// nonzero.
pub fn s_f0_exponent(g: &ThreeComponentGeometry, exp: &EqCurve) -> Option<Rat> {
    for i in 0..g.w_fan.num_rays() {
        if &exp.beta[i] + &exp.lam * &g.a[i] != Rat::zero() {
            return None;
        }
    }
    Some(exp.lam.clone())
}

/// One application of the shift operator S^{dir}, dir = +1 or -1, by the
/// localization formulas at the three fixed components.
fn shift_once(
    g: &ThreeComponentGeometry,
    series: &TripleSeries,
    dir: i64,
) -> Result<TripleSeries, EquivError> {
    let a = g.a_class();
    let ab = g.a_class().add(&g.b_class());
    // the largest exponent shift must stay within the truncation bound
    if q_part_pairing(g, &ab) > series.qbound {
        return Err(EquivError::TruncationOverflow);
    }
    let mut out = TripleSeries {
        terms: BTreeMap::new(),
        qbound: series.qbound.clone(),
    };
    for (exp, t) in &series.terms {
        if dir == 1 {
            let minus = t
                .minus
                .shift_lambda(1)
                .mul_euler(&euler_minus_normal(g, 0), &g.f_minus.ring);
            let zero = t
                .zero
                .shift_lambda(1)
                .mul_euler(&euler_f0(g, true, 1, 0), &g.f_zero.ring)
                .div_euler(&euler_f0(g, false, -1, 1), &g.f_zero.ring);
            let plus = t
                .plus
                .shift_lambda(1)
                .div_euler(&euler_plus_normal(g, 1), &g.f_plus.ring);
            out.insert(
                g,
                exp.clone(),
                Triple {
                    plus: Component::zero(),
                    zero: Component::zero(),
                    minus,
                },
            );
            out.insert(
                g,
                exp.add(&a),
                Triple {
                    plus: Component::zero(),
                    zero,
                    minus: Component::zero(),
                },
            );
            out.insert(
                g,
                exp.add(&ab),
                Triple {
                    plus,
                    zero: Component::zero(),
                    minus: Component::zero(),
                },
            );
        } else {
            let minus = t
                .minus
                .shift_lambda(-1)
                .div_euler(&euler_minus_normal(g, 1), &g.f_minus.ring);
            let zero = t
                .zero
                .shift_lambda(-1)
                .mul_euler(&euler_f0(g, false, -1, 0), &g.f_zero.ring)
                .div_euler(&euler_f0(g, true, 1, 1), &g.f_zero.ring);
            let plus = t
                .plus
                .shift_lambda(-1)
                .mul_euler(&euler_plus_normal(g, 0), &g.f_plus.ring);
            out.insert(
                g,
                exp.clone(),
                Triple {
                    plus: Component::zero(),
                    zero: Component::zero(),
                    minus,
                },
            );
            out.insert(
                g,
                exp.sub(&a),
                Triple {
                    plus: Component::zero(),
                    zero,
                    minus: Component::zero(),
                },
            );
            out.insert(
                g,
                exp.sub(&ab),
                Triple {
                    plus,
                    zero: Component::zero(),
                    minus: Component::zero(),
                },
            );
        }
    }
    Ok(out)
}

/// The shift operator S^k, computed by composing single steps.
pub fn shift_s(
    g: &ThreeComponentGeometry,
    series: &TripleSeries,
    k: i64,
) -> Result<TripleSeries, EquivError> {
    let mut out = series.clone();
    let dir = if k >= 0 { 1 } else { -1 };
    for _ in 0..k.abs() {
        out = shift_once(g, &out, dir)?;
    }
    Ok(out)
}

/// The leading-term operator: the coefficient at exponent zero, after
/// verifying that the whole support is Novikov-effective.
pub fn leading_term(
    g: &ThreeComponentGeometry,
    series: &TripleSeries,
) -> Result<Triple, EquivError> {
    for (exp, t) in &series.terms {
        if !t.is_zero() && !q_part_effective(g, exp) {
            return Err(EquivError::NegativeSupport(format!("{exp:?}")));
        }
    }
    let zero_exp = EqCurve::zero(g.w_fan.num_rays());
    Ok(series
        .terms
        .get(&zero_exp)
        .cloned()
        .unwrap_or_else(Triple::zero_class))
}

/// The Q_W = 0 part of a series: pure powers of S_{F0}, keyed by exponent.
pub fn at_q_zero(
    g: &ThreeComponentGeometry,
    series: &TripleSeries,
) -> Result<BTreeMap<Rat, Triple>, EquivError> {
    let mut out = BTreeMap::new();
    for (exp, t) in &series.terms {
        if t.is_zero() {
            continue;
        }
        if !q_part_effective(g, exp) {
            return Err(EquivError::NegativeSupport(format!("{exp:?}")));
        }
        if let Some(s) = s_f0_exponent(g, exp) {
            out.insert(s, t.clone());
        }
    }
    Ok(out)
}

/// Kirwan map at one quotient: restrict to F+- and substitute lam by the
/// hyperplane class.
pub fn kirwan_map(
    g: &ThreeComponentGeometry,
    t: &Triple,
    side: Side,
) -> Result<ZSeries, EquivError> {
    match side {
        Side::Minus => t.minus.eval_at(&g.p_minus_class(), &g.f_minus.ring),
        Side::Plus => t.plus.eval_at(&g.p_plus_class(), &g.f_plus.ring),
    }
}

/// kappa_F of the fourier module: evaluate the F0 restriction at
/// lam = -rho_{F0}/c_{F0}.
pub fn kappa_f0(g: &ThreeComponentGeometry, t: &Triple) -> Result<ZSeries, EquivError> {
    if g.c_f0 == 0 {
        return Err(EquivError::Geometry(GeometryError::FlopNotApplicable));
    }
    let v = g.f_zero.rho_f().scale(&(-Rat::one() / rat(g.c_f0)));
    t.zero.eval_at(&v, &g.f_zero.ring)
}

/// Kernel membership: true when the Kirwan image vanishes; for structural
/// witnesses the caller inspects the complementary restrictions.
pub fn kirwan_kernel_check(
    g: &ThreeComponentGeometry,
    t: &Triple,
    side: Side,
) -> Result<(bool, ZSeries), EquivError> {
    let img = kirwan_map(g, t, side)?;
    Ok((zseries_is_zero(&img), img))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::Fan;
    use crate::geometry::build_blowup_geometry;

    fn blowup_p2() -> ThreeComponentGeometry {
        let p2 = Fan::projective_space(2).unwrap();
        build_blowup_geometry(&p2, &[0, 1]).unwrap()
    }

    #[test]
    fn euler_classes() {
        let g = blowup_p2();
        // trivial rank-2 bundle over the wall point, sign +, m = 0: lam^2
        let e = equivariant_euler(
            &[El::zero(&g.f_zero.ring), El::zero(&g.f_zero.ring)]
                .map(|_| El::zero(&g.f_zero.ring))
                .to_vec(),
            1,
            0,
            &g.f_zero.ring,
        );
        // wait: degrees are zero classes, so factors are plain lam
        assert_eq!(e.num.len(), 1);
        assert!(e.num.contains_key(&(2, 0)));
        // rank 0: empty product = 1
        let one = equivariant_euler(&[], 1, 0, &g.f_zero.ring);
        assert!(one.num.contains_key(&(0, 0)));
    }

    #[test]
    fn euler_with_chern_root() {
        // O(1) over P1, sign +, m = 1: lam + z + H
        let p1 = CohRing::new(Fan::projective_space(1).unwrap()).unwrap();
        let h = p1.ray_class(0);
        let e = equivariant_euler(&[h.clone()], 1, 1, &p1);
        assert_eq!(e.num.get(&(1, 0)), Some(&p1.one()));
        assert_eq!(e.num.get(&(0, 1)), Some(&p1.one()));
        assert_eq!(e.num.get(&(0, 0)), Some(&h));
    }

    #[test]
    fn shift_group_law() {
        let g = blowup_p2();
        // a reference triple with polynomial restrictions
        let e_class = g.p_minus_class();
        let t = Triple {
            plus: Component::monomial(g.f_plus.ring.ray_class(0), 1, 0),
            zero: Component::monomial(g.f_zero.ring.one(), 2, 0),
            minus: Component::from_class(e_class),
        };
        let s = TripleSeries::from_triple(&g, t.clone(), rat(40));
        for k in 1..=3i64 {
            let fwd = shift_s(&g, &s, k).unwrap();
            let back = shift_s(&g, &fwd, -k).unwrap();
            assert_eq!(back.terms.len(), 1, "k = {k}");
            let got = back
                .terms
                .get(&EqCurve::zero(g.w_fan.num_rays()))
                .unwrap();
            assert_eq!(got, &t, "k = {k}");
        }
    }

    #[test]
    fn leading_term_of_shift() {
        let g = blowup_p2();
        let alpha = Triple::one(&g);
        let s = TripleSeries::from_triple(&g, alpha.clone(), rat(40));
        // LT(S 1) = i_{F-,*}(e^{-z d/dlam} 1|_{F-}) = i_{F-,*}(1)
        let lt = leading_term(&g, &shift_s(&g, &s, 1).unwrap()).unwrap();
        let expect = Triple::push_from_minus(
            Component::from_class(g.f_minus.ring.one()),
            &g,
        );
        assert_eq!(lt, expect);
        // LT(Q^{a+b} S^{-1} 1) = i_{F+,*}(1)
        let sm = shift_s(&g, &s, -1).unwrap();
        let shifted = sm.mul_monomial(&g, &g.a_class().add(&g.b_class()));
        let lt = leading_term(&g, &shifted).unwrap();
        let expect = Triple::push_from_plus(
            Component::from_class(g.f_plus.ring.one()),
            &g,
        );
        assert_eq!(lt, expect);
        // LT(1) = 1
        let lt = leading_term(&g, &s).unwrap();
        assert_eq!(lt, alpha);
    }

    #[test]
    fn leading_term_rejects_negative_support() {
        let g = blowup_p2();
        let s = TripleSeries::from_triple(&g, Triple::one(&g), rat(40));
        // S^{-1} alone has F0 support at -a: negative
        let sm = shift_s(&g, &s, -1).unwrap();
        assert!(matches!(
            leading_term(&g, &sm),
            Err(EquivError::NegativeSupport(_))
        ));
    }

    #[test]
    fn kirwan_map_values() {
        let g = blowup_p2();
        // restriction 1 -> 1
        let one = Triple::one(&g);
        let img = kirwan_map(&g, &one, Side::Minus).unwrap();
        assert_eq!(img.get(&0), Some(&g.f_minus.ring.one()));
        // restriction lam -> p_-
        let lam = Triple {
            plus: Component::zero(),
            zero: Component::zero(),
            minus: Component::monomial(g.f_minus.ring.one(), 1, 0),
        };
        let img = kirwan_map(&g, &lam, Side::Minus).unwrap();
        assert_eq!(img.get(&0), Some(&g.p_minus_class()));
        // e_lam(N_{F-/W}) -> 0
        let e = Triple::push_from_minus(Component::from_class(g.f_minus.ring.one()), &g);
        let (in_kernel, _) = kirwan_kernel_check(&g, &e, Side::Minus).unwrap();
        assert!(in_kernel);
    }

    #[test]
    fn kirwan_kernel_divisor_classes() {
        let g = blowup_p2();
        // [X-] = i_{F-,*}(1) vanishes under kappa_{X-} and restricts to zero
        // on the other components
        let xm = Triple::push_from_minus(Component::from_class(g.f_minus.ring.one()), &g);
        assert!(kirwan_kernel_check(&g, &xm, Side::Minus).unwrap().0);
        assert!(xm.plus.is_zero() && xm.zero.is_zero());
        let xp = Triple::push_from_plus(Component::from_class(g.f_plus.ring.one()), &g);
        assert!(kirwan_kernel_check(&g, &xp, Side::Plus).unwrap().0);
        // the constant 1 is not in the kernel
        assert!(!kirwan_kernel_check(&g, &Triple::one(&g), Side::Minus)
            .unwrap()
            .0);
    }

    #[test]
    fn kappa_f0_evaluation() {
        let g = blowup_p2();
        // F0 = pt: rho = 0, kappa_F(lam) = 0, constants pass through
        let lam = Triple {
            plus: Component::zero(),
            zero: Component::monomial(g.f_zero.ring.one(), 1, 0),
            minus: Component::zero(),
        };
        assert!(zseries_is_zero(&kappa_f0(&g, &lam).unwrap()));
        let c = Triple {
            plus: Component::zero(),
            zero: Component::from_class(g.f_zero.ring.one().scale(&rat(7))),
            minus: Component::zero(),
        };
        let img = kappa_f0(&g, &c).unwrap();
        assert_eq!(img.get(&0), Some(&g.f_zero.ring.one().scale(&rat(7))));
    }

    use crate::ring::CohRing;

    #[test]
    fn component_cancellation_exact() {
        // (lam + z)(lam - z) / (lam + z) normalizes to lam - z
        let p1 = CohRing::new(Fan::projective_space(1).unwrap()).unwrap();
        let mut c = Component::from_class(p1.one());
        c = c.mul_euler(&[(1, 1, El::zero(&p1)), (1, -1, El::zero(&p1))], &p1);
        *c.den.entry((1, 1)).or_insert(0) += 1;
        let n = c.normalize(&p1);
        assert!(n.den.is_empty());
        assert_eq!(n.num.get(&(1, 0)), Some(&p1.one()));
        assert_eq!(n.num.get(&(0, 1)), Some(&p1.one().scale(&rat(-1))));
    }
}
