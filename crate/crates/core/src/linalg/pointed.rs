//! Deciding whether two pointed abelian groups are isomorphic.
//!
//! Coordinates follow [`PointedAbelianGroup`]: `Z^r ⊕ Z/d_1 ⊕ ... ⊕ Z/d_t`.
//! An automorphism is a matrix `[[A, 0], [C, B]]` with `A ∈ GL(r, Z)`,
//! `B ∈ Aut(T)` and `C: Z^r → T` arbitrary.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{IntMatrix, K0Element, LinalgError, PointedAbelianGroup};

pub const DEFAULT_SIZE_CAP: u64 = 10_000;

/// Search cap for finite-group orbit enumeration; `LPA_SIZE_CAP` overrides.
pub fn size_cap() -> u64 {
    std::env::var("LPA_SIZE_CAP")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_SIZE_CAP)
}

/// An isomorphism and its inverse, both acting on coordinate vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointedIsoWitness {
    pub forward: IntMatrix,
    pub inverse: IntMatrix,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PointedIsoVerdict {
    Yes(PointedIsoWitness),
    No(String),
    Undecided(String),
}

impl PointedIsoVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, PointedIsoVerdict::Yes(_))
    }

    pub fn is_no(&self) -> bool {
        matches!(self, PointedIsoVerdict::No(_))
    }
}

impl fmt::Display for PointedIsoVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointedIsoVerdict::Yes(w) => write!(f, "yes (map {})", w.forward),
            PointedIsoVerdict::No(reason) => write!(f, "no ({reason})"),
            PointedIsoVerdict::Undecided(reason) => write!(f, "undecided ({reason})"),
        }
    }
}

fn apply(p: &PointedAbelianGroup, m: &IntMatrix, x: &[BigInt]) -> K0Element {
    p.reduce(&K0Element::new(m.mul_vec(x))).expect("matching dimension")
}

fn basis(k: usize, j: usize) -> Vec<BigInt> {
    (0..k)
        .map(|i| if i == j { BigInt::one() } else { BigInt::zero() })
        .collect()
}

/// Whether `m` induces a well-defined homomorphism `p → q` (columns of
/// torsion generators are killed by the generator's order).
fn is_homomorphism(m: &IntMatrix, p: &PointedAbelianGroup, q: &PointedAbelianGroup) -> bool {
    if m.rows() != q.dimension() || m.cols() != p.dimension() {
        return false;
    }
    (0..p.invariant_factors.len()).all(|tj| {
        let j = p.free_rank + tj;
        let order = &p.invariant_factors[tj];
        (0..q.free_rank).all(|i| m[(i, j)].is_zero())
            && q.invariant_factors
                .iter()
                .enumerate()
                .all(|(ti, d)| (order * &m[(q.free_rank + ti, j)]).is_multiple_of(d))
    })
}

impl PointedIsoWitness {
    /// Re-checks every claim: both maps are homomorphisms, they are mutually
    /// inverse, and the forward map carries unit to unit.
    pub fn validate(&self, p: &PointedAbelianGroup, q: &PointedAbelianGroup) -> bool {
        if !p.same_group(q) || !is_homomorphism(&self.forward, p, q) || !is_homomorphism(&self.inverse, q, p) {
            return false;
        }
        let k = p.dimension();
        let round_trips = (0..k).all(|j| {
            let e = basis(k, j);
            let there = apply(q, &self.forward, &e);
            let back = apply(p, &self.inverse, &there.coords);
            let other = apply(p, &self.inverse, &e);
            let again = apply(q, &self.forward, &other.coords);
            back.coords == e && again.coords == e
        });
        round_trips && apply(q, &self.forward, &p.unit_class.coords) == q.unit_class
    }
}

/// Unimodular `P` and its inverse with `P a = g e₁`, `g = gcd(a) ≥ 0`.
fn gcd_transform(a: &[BigInt]) -> (IntMatrix, IntMatrix, BigInt) {
    let r = a.len();
    let mut p = IntMatrix::identity(r);
    let mut q = IntMatrix::identity(r);
    let mut v = a.to_vec();
    for k in 1..r {
        if v[k].is_zero() {
            continue;
        }
        let (x, y) = (v[0].clone(), v[k].clone());
        let eg = x.extended_gcd(&y);
        let (mut h, mut s, mut t) = (eg.gcd, eg.x, eg.y);
        if h.is_negative() {
            h = -h;
            s = -s;
            t = -t;
        }
        let (xh, yh) = (&x / &h, &y / &h);
        // rows (0, k) <- [[s, t], [-y/h, x/h]] (rows 0, k)
        for j in 0..r {
            let (r0, rk) = (p[(0, j)].clone(), p[(k, j)].clone());
            p[(0, j)] = &s * &r0 + &t * &rk;
            p[(k, j)] = &xh * &rk - &yh * &r0;
        }
        // columns (0, k) <- (columns 0, k) [[x/h, -t], [y/h, s]]
        for i in 0..r {
            let (c0, ck) = (q[(i, 0)].clone(), q[(i, k)].clone());
            q[(i, 0)] = &c0 * &xh + &ck * &yh;
            q[(i, k)] = &ck * &s - &c0 * &t;
        }
        v[0] = h;
        v[k] = BigInt::zero();
    }
    if r > 0 && v[0].is_negative() {
        p.negate_row(0);
        for i in 0..r {
            let x = std::mem::take(&mut q[(i, 0)]);
            q[(i, 0)] = -x;
        }
        v[0] = -std::mem::take(&mut v[0]);
    }
    let g = v.first().cloned().unwrap_or_default();
    (p, q, g)
}

fn gcd_of(a: &[BigInt]) -> BigInt {
    a.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

/// Height of `y` at `p` in `⊕ Z/d_i`; `None` for infinite height.
fn p_height(y: &[u64], factors: &[u64], p: u64) -> Option<u32> {
    let valuation = |mut n: u64| {
        let mut k = 0;
        while n.is_multiple_of(p) {
            n /= p;
            k += 1;
        }
        k
    };
    y.iter()
        .zip(factors)
        .filter(|(&c, _)| c != 0)
        .filter_map(|(&c, &d)| {
            let (vc, vd) = (valuation(c), valuation(d));
            (vc < vd).then_some(vc)
        })
        .min()
}

/// The Ulm sequence `(h(x), h(px), h(p²x), ...)` up to the first infinite
/// height. Equal sequences at every prime characterize automorphism orbits
/// in finite abelian groups.
fn ulm_sequence(x: &[u64], factors: &[u64], p: u64) -> Vec<u32> {
    let mut y = x.to_vec();
    let mut seq = Vec::new();
    while let Some(h) = p_height(&y, factors, p) {
        seq.push(h);
        for (c, &d) in y.iter_mut().zip(factors) {
            *c = ((*c as u128 * p as u128) % d as u128) as u64;
        }
    }
    seq
}

fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut primes = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            primes.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        primes.push(n);
    }
    primes
}

#[derive(Debug, Clone, Copy)]
enum Elementary {
    /// `g_i ↦ c g_i` for a unit `c` mod `d_i`.
    Scale { i: usize, c: u64 },
    /// `g_j ↦ g_j + c g_i`, well defined when `d_i | c d_j`.
    Shear { i: usize, j: usize, c: u64 },
}

impl Elementary {
    fn act(self, x: &mut [u64], d: &[u64]) {
        match self {
            Elementary::Scale { i, c } => x[i] = ((x[i] as u128 * c as u128) % d[i] as u128) as u64,
            Elementary::Shear { i, j, c } => x[i] = ((x[i] as u128 + c as u128 * x[j] as u128) % d[i] as u128) as u64,
        }
    }

    fn matrix(self, t: usize, inverse: bool, d: &[u64]) -> IntMatrix {
        let mut m = IntMatrix::identity(t);
        match self {
            Elementary::Scale { i, c } => {
                let c = if inverse { mod_inverse(c, d[i]) } else { c };
                m[(i, i)] = c.into();
            }
            Elementary::Shear { i, j, c } => {
                let c = BigInt::from(c);
                m[(i, j)] = if inverse { -c } else { c };
            }
        }
        m
    }
}

fn mod_inverse(c: u64, d: u64) -> u64 {
    let eg = (c as i128).extended_gcd(&(d as i128));
    eg.x.rem_euclid(d as i128) as u64
}

/// Small generating set of `Aut(⊕ Z/d_i)`: `-1` and every prime below `d_i`
/// coprime to it generate the units; one shear per ordered pair generates
/// the admissible shears.
fn generators(d: &[u64]) -> Vec<Elementary> {
    let mut gens = Vec::new();
    for (i, &di) in d.iter().enumerate() {
        if di > 2 {
            gens.push(Elementary::Scale { i, c: di - 1 });
        }
        for c in 2..di {
            if is_prime(c) && c.gcd(&di) == 1 {
                gens.push(Elementary::Scale { i, c });
            }
        }
    }
    for i in 0..d.len() {
        for j in 0..d.len() {
            if i != j {
                let c = d[i] / d[i].gcd(&d[j]);
                if !c.is_multiple_of(d[i]) {
                    gens.push(Elementary::Shear { i, j, c });
                }
            }
        }
    }
    gens
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|p| p * p <= n).all(|p| !n.is_multiple_of(p))
}

/// Breadth-first orbit of `start` under [`generators`]; for each orbit point,
/// the automorphism reaching it and its inverse.
struct Orbit {
    d: Vec<u64>,
    gens: Vec<Elementary>,
    parent: HashMap<Vec<u64>, Option<(Vec<u64>, usize)>>,
    order: Vec<Vec<u64>>,
}

impl Orbit {
    fn explore(start: Vec<u64>, d: &[u64]) -> Self {
        let gens = generators(d);
        let mut parent = HashMap::new();
        parent.insert(start.clone(), None);
        let mut order = vec![start];
        let mut head = 0;
        while head < order.len() {
            let x = order[head].clone();
            head += 1;
            for (k, g) in gens.iter().enumerate() {
                let mut y = x.clone();
                g.act(&mut y, d);
                if !parent.contains_key(&y) {
                    parent.insert(y.clone(), Some((x.clone(), k)));
                    order.push(y);
                }
            }
        }
        Self {
            d: d.to_vec(),
            gens,
            parent,
            order,
        }
    }

    /// `(B, B⁻¹)` with `B start = target`.
    fn path_to(&self, target: &[u64]) -> (IntMatrix, IntMatrix) {
        let t = self.d.len();
        let mut forward = IntMatrix::identity(t);
        let mut inverse = IntMatrix::identity(t);
        let mut x = target.to_vec();
        while let Some(Some((prev, k))) = self.parent.get(&x) {
            let g = self.gens[*k];
            forward = &forward * &g.matrix(t, false, &self.d);
            inverse = &g.matrix(t, true, &self.d) * &inverse;
            x = prev.clone();
        }
        (forward, inverse)
    }
}

fn to_u64(xs: &[BigInt]) -> Vec<u64> {
    xs.iter()
        .map(|x| x.to_u64().expect("reduced torsion coordinate"))
        .collect()
}

fn block(a: &IntMatrix, shear: &IntMatrix, torsion: &IntMatrix) -> IntMatrix {
    let r = a.rows();
    let t = torsion.rows();
    IntMatrix::from_fn(r + t, r + t, |i, j| match (i < r, j < r) {
        (true, true) => a[(i, j)].clone(),
        (true, false) => BigInt::zero(),
        (false, true) => shear[(i - r, j)].clone(),
        (false, false) => torsion[(i - r, j - r)].clone(),
    })
}

pub fn pointed_iso_exists(p: &PointedAbelianGroup, q: &PointedAbelianGroup) -> Result<PointedIsoVerdict, LinalgError> {
    pointed_iso_exists_with_cap(p, q, size_cap())
}

/// Trivial and free groups are decided by the gcd of the unit. Finite groups
/// are decided by Ulm sequences; a witness is then found by orbit search,
/// which is refused above `cap`. Mixed groups search the torsion orbit and
/// report undecided above `cap`.
pub fn pointed_iso_exists_with_cap(
    p: &PointedAbelianGroup,
    q: &PointedAbelianGroup,
    cap: u64,
) -> Result<PointedIsoVerdict, LinalgError> {
    if p.free_rank != q.free_rank {
        return Ok(PointedIsoVerdict::No(format!(
            "free ranks differ ({} vs {})",
            p.free_rank, q.free_rank
        )));
    }
    if p.invariant_factors != q.invariant_factors {
        return Ok(PointedIsoVerdict::No(format!(
            "invariant factors differ ({} vs {})",
            p.render_group(),
            q.render_group()
        )));
    }
    let r = p.free_rank;
    let a = p.reduce(&p.unit_class)?;
    let b = q.reduce(&q.unit_class)?;
    let (a_free, a_tors) = a.coords.split_at(r);
    let (b_free, b_tors) = b.coords.split_at(r);
    let g = gcd_of(a_free);
    if g != gcd_of(b_free) {
        return Ok(PointedIsoVerdict::No(format!(
            "unit content in the free part differs ({} vs {})",
            g,
            gcd_of(b_free)
        )));
    }
    let (pa, pa_inv, _) = gcd_transform(a_free);
    let (pb, pb_inv, _) = gcd_transform(b_free);
    let free_forward = &pb_inv * &pa;
    let free_inverse = &pa_inv * &pb;

    let t = p.invariant_factors.len();
    if t == 0 {
        let witness = PointedIsoWitness {
            forward: free_forward,
            inverse: free_inverse,
        };
        return Ok(PointedIsoVerdict::Yes(witness));
    }

    let order: BigInt = p.invariant_factors.iter().product();
    if r == 0 {
        let d = to_u64(&p.invariant_factors);
        let (x, y) = (to_u64(a_tors), to_u64(b_tors));
        for prime in prime_divisors(*d.last().expect("t > 0")) {
            let (sx, sy) = (ulm_sequence(&x, &d, prime), ulm_sequence(&y, &d, prime));
            if sx != sy {
                return Ok(PointedIsoVerdict::No(format!(
                    "{prime}-height sequences of the units differ ({sx:?} vs {sy:?})"
                )));
            }
        }
    }
    if order > BigInt::from(cap) {
        return if r == 0 {
            Err(LinalgError::SizeCap { order, cap })
        } else {
            Ok(PointedIsoVerdict::Undecided(format!(
                "torsion part of order {order} exceeds the search cap {cap}"
            )))
        };
    }

    let d = to_u64(&p.invariant_factors);
    let orbit = Orbit::explore(to_u64(a_tors), &d);
    // An orbit point s works when b_T - s lies in g·T; the shear C then
    // absorbs the difference.
    let coset_moduli: Vec<BigInt> = d.iter().map(|&di| g.gcd(&BigInt::from(di))).collect();
    let target = orbit.order.iter().find(|s| {
        s.iter()
            .zip(b_tors)
            .zip(&coset_moduli)
            .all(|((&si, bi), h)| (bi - BigInt::from(si)).is_multiple_of(h))
    });
    let Some(s) = target else {
        return Ok(if r == 0 {
            PointedIsoVerdict::Undecided("orbit search disagrees with the height invariants".into())
        } else {
            PointedIsoVerdict::No("no automorphism of the torsion part moves the unit into the required coset".into())
        });
    };
    let (tors_forward, tors_inverse) = orbit.path_to(s);

    // C = w λᵀ with g w = b_T - s and λ the first row of P_a (λ·a_F = g).
    let mut shear = IntMatrix::zeros(t, r);
    if r > 0 && !g.is_zero() {
        let w: Vec<BigInt> = s
            .iter()
            .zip(b_tors)
            .zip(&d)
            .map(|((&si, bi), &di)| {
                let di = BigInt::from(di);
                let diff = (bi - BigInt::from(si)).mod_floor(&di);
                let h = g.gcd(&di);
                let modulus = &di / &h;
                let unit = (&g / &h).mod_floor(&modulus);
                let inv = if modulus.is_one() {
                    BigInt::zero()
                } else {
                    let eg = unit.extended_gcd(&modulus);
                    eg.x.mod_floor(&modulus)
                };
                ((&diff / &h) * inv).mod_floor(&modulus)
            })
            .collect();
        for i in 0..t {
            for j in 0..r {
                shear[(i, j)] = &w[i] * &pa[(0, j)];
            }
        }
    }
    let forward = block(&free_forward, &shear, &tors_forward);
    // Inverse: [[A⁻¹, 0], [-B⁻¹ C A⁻¹, B⁻¹]].
    let back_shear = &(&tors_inverse * &shear) * &free_inverse;
    let neg_back_shear = IntMatrix::from_fn(t, r, |i, j| -back_shear[(i, j)].clone());
    let inverse = block(&free_inverse, &neg_back_shear, &tors_inverse);
    let witness = PointedIsoWitness { forward, inverse };
    if !witness.validate(p, q) {
        return Err(LinalgError::Inconsistent(
            "constructed pointed isomorphism failed validation".into(),
        ));
    }
    Ok(PointedIsoVerdict::Yes(witness))
}
