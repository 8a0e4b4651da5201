//! Resolvents `(α|χ) = Σ χ(g^{-1}) g(α)`, rational idempotents of `Q[G]`,
//! Gauss sums, and the valuations of resolvent ideals above a tamely
//! ramified prime.
//!
//! Valuations are first taken in the ambient ring `A = Q(ζ_N)` with `N` the
//! lcm of the conductor of `L` and the order of `χ`, normalized so that
//! `v(p) = e_p(A)`. They are then rescaled to `L' = L(ζ_{ord χ})`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{euler_phi, gcd, lcm, pow_mod, primitive_root, ramanujan_sum, split_off};
use crate::cyclotomic::{integer_valuation, split_prime, valuation_with_cap, CycInt, PrimeAbove};
use crate::cyclotomic::DEFAULT_PRECISION_CAP;
use crate::field::{lift_unit, AbelianField, DirichletCharacter};
use crate::group::{AbelianGroup, Elem};
use crate::stickelberger::theta;
use crate::tower::Tower;
use crate::units::unit_group;
use crate::{Error, Result};

/// The idempotent of `Q[G]` attached to one Galois orbit of characters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Idempotent {
    pub representative: Elem,
    pub orbit: Vec<Elem>,
    /// Common order `d` of the characters in the orbit; the value field is `Q(ζ_d)`.
    pub order: u64,
    /// Coefficient of each group element, indexed by `AbelianGroup::index`.
    pub coefficients: Vec<BigRational>,
}

impl Idempotent {
    pub fn value_field_degree(&self) -> u64 {
        euler_phi(self.order)
    }
}

/// `e_ψ = (1/|G|) Σ_g Tr(ψ(g^{-1})) g`, one per orbit of `Gal(Q̄/Q)` on the
/// characters of `G`. Characters are identified with `G` through the pairing.
pub fn rational_idempotents(g: &AbelianGroup) -> Vec<Idempotent> {
    let n = g.order();
    let e = g.exponent();
    let mut seen = vec![false; n as usize];
    let mut out = Vec::new();
    for w in g.elements() {
        let idx = g.index(&w);
        if seen[idx] {
            continue;
        }
        let d = g.element_order(&w);
        let mut orbit = Vec::new();
        for j in (1..=d).filter(|&j| gcd(j, d) == 1) {
            let x = g.scale(&w, j);
            seen[g.index(&x)] = true;
            orbit.push(x);
        }
        let coefficients = g
            .elements()
            .map(|x| {
                // ψ(x) = ζ_d^k; the orbit sum of ψ(x^{-1}) is the Ramanujan sum c_d(k)
                let k = g.pairing(&w, &x) / (e / d);
                BigRational::new(BigInt::from(ramanujan_sum(d, k)), BigInt::from(n))
            })
            .collect();
        out.push(Idempotent { representative: w, orbit, order: d, coefficients });
    }
    out
}

/// Product in `Q[G]` with coefficients indexed by `AbelianGroup::index`.
pub fn group_ring_mul(g: &AbelianGroup, a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let elems: Vec<Elem> = g.elements().collect();
    let mut out = vec![BigRational::zero(); elems.len()];
    for (i, x) in elems.iter().enumerate() {
        if a[i].is_zero() {
            continue;
        }
        for (j, y) in elems.iter().enumerate() {
            if b[j].is_zero() {
                continue;
            }
            out[g.index(&g.add(x, y))] += &a[i] * &b[j];
        }
    }
    out
}

/// Exact check that the idempotents are orthogonal, idempotent and sum to 1.
pub fn idempotents_are_complete(g: &AbelianGroup, es: &[Idempotent]) -> bool {
    let n = g.order() as usize;
    let mut one = vec![BigRational::zero(); n];
    one[g.index(&g.zero())] = BigRational::one();
    let zero = vec![BigRational::zero(); n];
    let mut total = zero.clone();
    for (i, a) in es.iter().enumerate() {
        for (k, c) in a.coefficients.iter().enumerate() {
            total[k] += c;
        }
        for (j, b) in es.iter().enumerate() {
            let prod = group_ring_mul(g, &a.coefficients, &b.coefficients);
            let expected = if i == j { &a.coefficients } else { &zero };
            if &prod != expected {
                return false;
            }
        }
    }
    total == one
}

/// `χ` viewed at the modulus `lcm(cond L, modulus χ)`, checked to be trivial on `H_L`.
fn character_on(t: &Tower, chi: &DirichletCharacter) -> Result<DirichletCharacter> {
    if !t.base.is_rational() {
        return Err(Error::PreconditionFailed("resolvents need base field Q".into()));
    }
    let n0 = lcm(t.modulus(), chi.modulus);
    let chi0 = chi.lift(n0)?;
    let ug = unit_group(n0);
    let hl = t.top.subgroup_at(n0);
    for x in hl.generating_set(ug.group()) {
        if chi0.value(ug.residue(&x)) != Some(0) {
            return Err(Error::GroupMismatch(format!(
                "character of modulus {} is not a character of L",
                chi.modulus
            )));
        }
    }
    Ok(chi0)
}

/// Residues (mod `n`) representing `Gal(L/K) = H_K / H_L`, for a multiple `n` of the conductor.
pub fn galois_representatives(t: &Tower, n: u64) -> Vec<u64> {
    let ug = unit_group(n);
    let g = ug.group();
    let hk = t.middle.subgroup_at(n);
    let hl = t.top.subgroup_at(n);
    let mut reps = BTreeSet::new();
    let mut out = Vec::new();
    for x in hk.elements(g) {
        if reps.insert(hl.coset_rep(g, &x)) {
            out.push(ug.residue(&x));
        }
    }
    out
}

fn check_in_field(alpha: &CycInt, l: &AbelianField) -> Result<()> {
    let m = alpha.conductor();
    if m % l.conductor() != 0 {
        return Err(Error::ConductorMismatch(l.conductor(), m));
    }
    for h in l.fixing_generators() {
        let a = lift_unit(h, l.modulus(), m);
        if alpha.galois_apply(a)? != *alpha {
            return Err(Error::PreconditionFailed("element does not lie in L".into()));
        }
    }
    Ok(())
}

/// `(α|χ) = Σ_{g ∈ Gal(L/K)} χ(g^{-1}) g(α)`, in `Q(ζ_N)` with `N = lcm(m_α, cond L, ord χ)`.
pub fn resolvent(alpha: &CycInt, chi: &DirichletCharacter, t: &Tower) -> Result<CycInt> {
    check_in_field(alpha, &t.top)?;
    let chi0 = character_on(t, chi)?;
    let n0 = chi0.modulus;
    let ord = chi0.order;
    let n = lcm(lcm(alpha.conductor(), n0), ord);
    let a = alpha.embed(n)?;
    let mut sum = CycInt::zero(n);
    for g in galois_representatives(t, n0) {
        let k = chi0.value(g).expect("unit");
        let root = CycInt::zeta(n, ((ord - k) % ord) * (n / ord));
        let term = a.galois_apply(lift_unit(g, n0, n))?.mul(&root)?;
        sum = sum.add(&term)?;
    }
    Ok(sum)
}

/// `Tr_{Q(ζ_f)/L}(ζ_f^j)` with `f` the conductor of `L`.
pub fn gaussian_period(l: &AbelianField, j: u64) -> CycInt {
    let f = l.conductor();
    let ug = unit_group(f);
    let terms = ug
        .residues_of(&l.subgroup_at(f))
        .into_iter()
        .map(|h| ((h * j) % f, BigInt::one()));
    CycInt::from_terms(f, terms)
}

/// `Σ_{a mod f} χ(a) ζ_f^a` for `χ` of modulus `f`, in `Q(ζ_{lcm(f, ord χ)})`.
pub fn gauss_sum(chi: &DirichletCharacter) -> CycInt {
    let f = chi.modulus;
    let ord = chi.order;
    let n = lcm(f, ord);
    let mut sum = CycInt::zero(n);
    for a in 1..f {
        if let Some(k) = chi.value(a) {
            let term = CycInt::zeta(n, (a * (n / f) + k * (n / ord)) % n);
            sum = sum.add(&term).expect("same ring");
        }
    }
    sum
}

/// The Gaussian periods `σ_g(η)`, `g ∈ Gal(L/Q)`, for `L` of prime conductor.
pub fn period_basis(l: &AbelianField) -> Result<Vec<CycInt>> {
    let f = l.conductor();
    if !crate::arith::is_prime(f) {
        return Err(Error::PreconditionFailed(format!("conductor {f} is not prime")));
    }
    let t = Tower::new(AbelianField::rational(), AbelianField::rational(), l.clone())?;
    let eta = gaussian_period(l, 1);
    galois_representatives(&t, f).into_iter().map(|g| eta.galois_apply(g)).collect()
}

fn trace_to_q(x: &CycInt) -> BigInt {
    let m = x.conductor();
    x.coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| c * BigInt::from(ramanujan_sum(m, k as u64)))
        .sum()
}

fn bareiss(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Discriminant of the period basis, `det Tr_{L/Q}(η_i η_j)`.
pub fn period_basis_discriminant(l: &AbelianField) -> Result<BigInt> {
    let basis = period_basis(l)?;
    let index = BigInt::from(euler_phi(l.conductor()) / l.degree());
    let mut gram = Vec::new();
    for x in &basis {
        let mut row = Vec::new();
        for y in &basis {
            row.push(trace_to_q(&x.mul(y)?) / &index);
        }
        gram.push(row);
    }
    Ok(bareiss(gram))
}

/// Resolvents of the spanning set `Tr(ζ_f^j)` of `O_L`, one `j` per orbit of
/// `Gal(Q(ζ_f)/K)` on `Z/f` (other members differ by a root of unity); zeros dropped.
pub fn resolvent_generators(t: &Tower, chi: &DirichletCharacter) -> Result<Vec<CycInt>> {
    let f = t.modulus();
    let hk = unit_group(f).residues_of(&t.middle.subgroup_at(f));
    let mut seen = vec![false; f as usize];
    let mut out = Vec::new();
    for j in 0..f {
        if seen[j as usize] {
            continue;
        }
        for &h in &hk {
            seen[((h * j) % f) as usize] = true;
        }
        let r = resolvent(&gaussian_period(&t.top, j), chi, t)?;
        if !r.is_zero() {
            out.push(r);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeValuation {
    /// Constant term of the factor of `Φ_{m'}` mod `p` naming the prime.
    pub label: u64,
    /// Image of `ζ_{m'}` in the residue field when it is `F_p`.
    pub root: Option<u64>,
    pub residue_degree: u64,
    pub ambient: u32,
    /// Valuation normalized in `L' = L(ζ_{ord χ})`.
    pub normalized: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdealAboveP {
    pub p: u64,
    pub ambient_conductor: u64,
    /// `e_p` of the ambient field and of `L'`.
    pub ambient_e: u64,
    pub field_e: u64,
    pub generators: usize,
    pub primes: Vec<PrimeValuation>,
    /// `Σ f·v` at the first generator, and `v_p` of its absolute norm.
    pub weighted_sum: u64,
    pub norm_valuation: u64,
}

/// Primes of `Q(ζ_{m'})` above `p` where `m = m' p^t`, with ambient-normalized
/// valuation functions for elements of `Q(ζ_m)`.
struct AbovePrimes {
    m: u64,
    below: u64,
    primes: Vec<PrimeAbove>,
}

impl AbovePrimes {
    fn new(p: u64, m: u64) -> Result<Self> {
        let (below, _) = split_off(m, p);
        Ok(AbovePrimes { m, below, primes: split_prime(p, below)? })
    }

    /// `(valuations, v_p(N x))` for a nonzero `x`.
    fn valuations(&self, x: &CycInt, cap: u32) -> Result<(Vec<u32>, u64)> {
        let x = x.embed(self.m)?;
        let n = if self.below == self.m { x } else { x.norm_to(self.below)? };
        let v = self
            .primes
            .iter()
            .map(|pr| valuation_with_cap(&n, pr, cap))
            .collect::<Result<Vec<_>>>()?;
        let nv = integer_valuation(&n.norm()?, self.primes[0].p) as u64;
        Ok((v, nv))
    }
}

/// Above-`p` part of `I = O_{L'} (O_L : χ)`: min valuations of the generators at
/// each prime above `p`.
pub fn resolvent_ideal_above_p(t: &Tower, chi: &DirichletCharacter, p: u64) -> Result<IdealAboveP> {
    resolvent_ideal_above_p_with_cap(t, chi, p, DEFAULT_PRECISION_CAP)
}

pub fn resolvent_ideal_above_p_with_cap(
    t: &Tower,
    chi: &DirichletCharacter,
    p: u64,
    cap: u32,
) -> Result<IdealAboveP> {
    if !crate::arith::is_prime(p) {
        return Err(Error::InvalidParameter(format!("{p} is not prime")));
    }
    if t.top.ramification_index(p) % p == 0 {
        return Err(Error::PreconditionFailed(format!("{p} is wildly ramified in L")));
    }
    let gens = resolvent_generators(t, chi)?;
    let chi0 = character_on(t, chi)?;
    let n = lcm(t.modulus(), chi0.order);
    ideal_above_p(&gens, n, &t.top, chi0.order, p, cap)
}

fn ideal_above_p(
    gens: &[CycInt],
    n: u64,
    l: &AbelianField,
    ord: u64,
    p: u64,
    cap: u32,
) -> Result<IdealAboveP> {
    let above = AbovePrimes::new(p, n)?;
    let ambient_e = AbelianField::cyclotomic(n).ramification_index(p);
    let field_e = l.compositum(&AbelianField::cyclotomic(ord)).ramification_index(p);
    let scale = ambient_e / field_e;
    let mut min: Option<Vec<u32>> = None;
    let mut first = None;
    for g in gens {
        let (v, nv) = above.valuations(g, cap)?;
        if first.is_none() {
            first = Some((v.clone(), nv));
        }
        min = Some(match min {
            None => v,
            Some(m) => m.iter().zip(&v).map(|(a, b)| *a.min(b)).collect(),
        });
    }
    let (Some(min), Some((v0, nv0))) = (min, first) else {
        return Err(Error::Internal("all resolvents vanish".into()));
    };
    let mut primes = Vec::new();
    for (pr, &v) in above.primes.iter().zip(&min) {
        if v as u64 % scale != 0 {
            return Err(Error::Internal(format!("valuation {v} not divisible by e(A/L') = {scale}")));
        }
        primes.push(PrimeValuation {
            label: pr.label,
            root: pr.root_mod_p(),
            residue_degree: pr.residue_degree,
            ambient: v,
            normalized: (v as u64 / scale) as u32,
        });
    }
    let weighted_sum = above.primes.iter().zip(&v0).map(|(pr, &v)| pr.residue_degree * v as u64).sum();
    Ok(IdealAboveP {
        p,
        ambient_conductor: n,
        ambient_e,
        field_e,
        generators: gens.len(),
        primes,
        weighted_sum,
        norm_valuation: nv0,
    })
}

/// The prime of `Q(ζ_d)` above `p` (`d | p - 1`) at which the local character
/// `η(x) = χ(x)^{-1}` agrees with `γ(x) = x^{-(p-1)/d}`: its root `r` satisfies
/// `r^v ≡ c^{(p-1)/d}` where `c` is a primitive root and `χ(c) = ζ_d^v`.
pub fn eta_gamma_root(chi: &DirichletCharacter, p: u64) -> Result<u64> {
    let chi = chi.primitive();
    if chi.modulus != p {
        return Err(Error::PreconditionFailed(format!("character conductor is not {p}")));
    }
    let d = chi.order;
    let c = primitive_root(p).expect("prime modulus");
    let v = chi.value(c).expect("unit");
    let target = pow_mod(c, (p - 1) / d, p);
    (1..p)
        .find(|&r| pow_mod(r, d, p) == 1 && pow_mod(r, v, p) == target && is_primitive(r, d, p))
        .ok_or_else(|| Error::Internal("no matching prime".into()))
}

fn is_primitive(r: u64, d: u64, p: u64) -> bool {
    crate::arith::mult_order(r, p) == Some(d)
}

#[derive(Debug, Clone, Serialize)]
pub struct CharacterInfo {
    pub modulus: u64,
    pub order: u64,
    pub conductor: u64,
    /// `(generator residue, exponent of ζ_order)`.
    pub values: Vec<(u64, u64)>,
}

impl From<&DirichletCharacter> for CharacterInfo {
    fn from(chi: &DirichletCharacter) -> Self {
        CharacterInfo {
            modulus: chi.modulus,
            order: chi.order,
            conductor: chi.conductor,
            values: chi.value_exponents(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ResolventReport {
    pub ell: u64,
    pub p: u64,
    pub field: AbelianField,
    pub character: CharacterInfo,
    pub ideal: IdealAboveP,
    /// Root of `ζ_ℓ` at the prime `𝔔` singled out by `η = γ`.
    pub matched_root: u64,
    /// `v(δ_i^{-1} 𝔔)` for `i = 1, ..., ℓ-1`.
    pub by_delta: Vec<u32>,
    /// Coefficient of `δ_i^{-1}` in `θ`, for the same `i`.
    pub theta_pattern: Vec<u64>,
    pub statement_a: bool,
    pub statement_b: bool,
    pub statement_c: bool,
    /// `a` such that `v(prime with root r^{ia}) = i` for all `i`; `1` when the
    /// matched indexing is exact, `None` when no translate fits.
    pub translate: Option<u64>,
    pub norm_invariant: bool,
    /// `g · conj(g) = p` for the Gauss sum generating `I`.
    pub gauss_modulus: bool,
}

fn root_index(primes: &[PrimeValuation], root: u64) -> Option<usize> {
    primes.iter().position(|q| q.root == Some(root))
}

/// Check the valuation pattern of `I` above `p` for `T = (Q, Q, L)` with `L`
/// cyclic of odd prime degree `ℓ` and conductor `p`.
pub fn verify_valuation_pattern(t: &Tower, chi: &DirichletCharacter, p: u64) -> Result<ResolventReport> {
    verify_valuation_pattern_with_cap(t, chi, p, DEFAULT_PRECISION_CAP)
}

pub fn verify_valuation_pattern_with_cap(
    t: &Tower,
    chi: &DirichletCharacter,
    p: u64,
    cap: u32,
) -> Result<ResolventReport> {
    let l = &t.top;
    let ell = l.degree();
    if !t.middle.is_rational() || !t.base.is_rational() {
        return Err(Error::PreconditionFailed("only K = Q is supported".into()));
    }
    if ell < 3 || !crate::arith::is_prime(ell) {
        return Err(Error::PreconditionFailed(format!("[L:K] = {ell} is not an odd prime")));
    }
    if l.conductor() != p || !crate::arith::is_prime(p) || p % ell != 1 {
        return Err(Error::PreconditionFailed(format!(
            "L must have prime conductor p = {p} with p ≡ 1 mod {ell}"
        )));
    }
    let chi0 = character_on(t, chi)?;
    if chi0.order != ell {
        return Err(Error::PreconditionFailed("χ must be a faithful character of Gal(L/K)".into()));
    }
    let gens = resolvent_generators(t, chi)?;
    let ideal = ideal_above_p(&gens, lcm(p, ell), l, ell, p, cap)?;
    let r = eta_gamma_root(&chi0, p)?;
    let th = theta(ell)?;
    let mut by_delta = Vec::new();
    let mut theta_pattern = Vec::new();
    for i in 1..ell {
        let k = root_index(&ideal.primes, pow_mod(r, i, p))
            .ok_or_else(|| Error::Internal("prime above p missing".into()))?;
        by_delta.push(ideal.primes[k].normalized);
        let c = th.coeff_of_inverse(i);
        theta_pattern.push(c.iter_u64_digits().next().unwrap_or(0));
    }
    let statement_a = by_delta[0] as u64 == theta_pattern[0];
    let statement_b = by_delta.iter().zip(&theta_pattern).all(|(&v, &e)| v as u64 == e);
    let statement_c = statement_b && ideal.primes.len() as u64 == ell - 1;
    let translate = (1..ell).find(|&a| {
        (1..ell).all(|i| {
            root_index(&ideal.primes, pow_mod(r, (i * a) % ell, p))
                .is_some_and(|k| ideal.primes[k].normalized as u64 == i)
        })
    });
    let g = &gens[0];
    let gauss_modulus = gens.len() == 1 && g.mul(&g.conj())?.as_integer() == Some(BigInt::from(p));
    Ok(ResolventReport {
        ell,
        p,
        field: l.clone(),
        character: (&chi0).into(),
        norm_invariant: ideal.weighted_sum == ideal.norm_valuation,
        ideal,
        matched_root: r,
        by_delta,
        theta_pattern,
        statement_a,
        statement_b,
        statement_c,
        translate,
        gauss_modulus,
    })
}

/// `(Q, Q, L)` with `L` the degree-`ell` subfield of `Q(ζ_p)` and a faithful character.
pub fn pattern_case(ell: u64, p: u64) -> Result<(Tower, DirichletCharacter)> {
    let l = AbelianField::cyclic_subfield(p, ell)?;
    let chi = faithful_character(&l)?;
    let q = AbelianField::rational();
    Ok((Tower::new(q.clone(), q, l)?, chi))
}

/// A generator of the (cyclic) character group of `L`.
pub fn faithful_character(l: &AbelianField) -> Result<DirichletCharacter> {
    l.character_group()
        .into_iter()
        .find(|c| c.order == l.degree())
        .ok_or_else(|| Error::PreconditionFailed("Gal(L/Q) is not cyclic".into()))
}

#[derive(Debug, Clone, Serialize)]
pub struct NormCompatPrime {
    pub root: u64,
    pub v_i: u32,
    pub v_itilde: u32,
    pub exact: bool,
    pub congruent: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct NormCompatReport {
    pub p: u64,
    pub degree: u64,
    pub t: u64,
    pub ambient_conductor: u64,
    /// `v(p)` in the ambient normalization; congruences are taken modulo it.
    pub ambient_e: u64,
    pub matched_root: u64,
    pub primes: Vec<NormCompatPrime>,
    /// `v(Ĩ) = t·v(I)` at the prime matched by `η = γ`.
    pub exact_at_matched: bool,
    /// `v(Ĩ) = t·v(I)` at every prime above `p`.
    pub exact_everywhere: bool,
    /// `v(Ĩ) ≡ t·v(I) mod v(p)` at every prime above `p`.
    pub congruent_everywhere: bool,
    pub holds: bool,
}

/// Compare `I` for `(L, χ)` with `Ĩ` for `(L̃, χ^t)`, `t = [L : L̃]`, prime by
/// prime in the ambient ring `Q(ζ_{p·ord χ})` (normalized `v(p) = p - 1`).
pub fn verify_norm_compat(l: &AbelianField, ltilde: &AbelianField, chi: &DirichletCharacter, p: u64) -> Result<NormCompatReport> {
    if !l.contains(ltilde) {
        return Err(Error::NotATower(format!("{ltilde:?} is not contained in {l:?}")));
    }
    if l.conductor() != p || p % l.degree() != 1 {
        return Err(Error::PreconditionFailed(format!("L must have conductor {p} and degree dividing {}", p - 1)));
    }
    let q = AbelianField::rational();
    let tower = Tower::new(q.clone(), q.clone(), l.clone())?;
    let chi0 = character_on(&tower, chi)?;
    let s = l.degree();
    if chi0.order != s {
        return Err(Error::PreconditionFailed("χ must be faithful on Gal(L/Q)".into()));
    }
    let t = s / ltilde.degree();
    let ug = unit_group(chi0.modulus);
    let chit = DirichletCharacter::new(chi0.modulus, ug.group().scale(&chi0.w, t));
    let ttower = Tower::new(q.clone(), q, ltilde.clone())?;
    let n = lcm(p, s);
    let i = ideal_above_p(&resolvent_generators(&tower, &chi0)?, n, l, s, p, DEFAULT_PRECISION_CAP)?;
    let it = ideal_above_p(&resolvent_generators(&ttower, &chit)?, n, l, s, p, DEFAULT_PRECISION_CAP)?;
    let e = i.ambient_e;
    let r = eta_gamma_root(&chi0, p)?;
    let mut primes = Vec::new();
    for (a, b) in i.primes.iter().zip(&it.primes) {
        let lhs = b.ambient as u64;
        let rhs = t * a.ambient as u64;
        primes.push(NormCompatPrime {
            root: a.root.expect("split prime"),
            v_i: a.ambient,
            v_itilde: b.ambient,
            exact: lhs == rhs,
            congruent: lhs % e == rhs % e,
        });
    }
    let exact_at_matched = primes.iter().any(|q| q.root == r && q.exact);
    let exact_everywhere = primes.iter().all(|q| q.exact);
    let congruent_everywhere = primes.iter().all(|q| q.congruent);
    Ok(NormCompatReport {
        p,
        degree: s,
        t,
        ambient_conductor: n,
        ambient_e: e,
        matched_root: r,
        primes,
        exact_at_matched,
        exact_everywhere,
        congruent_everywhere,
        holds: exact_at_matched && congruent_everywhere,
    })
}

/// `verify_norm_compat` for `L` the degree-`ℓ^m` subfield of `Q(ζ_p)` and `L̃` its
/// subfield of index `t`.
pub fn norm_compat_case(ell: u64, m: u32, t: u64, p: u64) -> Result<NormCompatReport> {
    let s = ell.pow(m);
    if s % t != 0 {
        return Err(Error::InvalidParameter(format!("{t} does not divide {s}")));
    }
    let l = AbelianField::cyclic_subfield(p, s)?;
    let ltilde = AbelianField::cyclic_subfield(p, s / t)?;
    let chi = faithful_character(&l)?;
    verify_norm_compat(&l, &ltilde, &chi, p)
}
