//! Decision procedures for the non-existence of weak normal integral bases
//! and for normal integral bases in odd abelian towers over `Q`.
//!
//! Every verdict carries a trace of the hypotheses that were checked, and
//! positive verdicts carry a witness whose fields can be re-verified with
//! [`check_witness`].

use serde::Serialize;

use crate::arith::{is_prime, prime_divisors};
use crate::error::{Error, Result};
use crate::field::{zeta_q_in_3power_closure, AbelianField};
use crate::group::{quotient_structure, AbelianGroup, ElementSet};
use crate::stickelberger::{det_certificate, ideal_minus_type, theta_minus_order, FERMAT_PRIMES};
use crate::tower::{canonical_split, cyclic_prime_power_decomposition, Tower};
use crate::units::{unit_group, UnitGroup};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    NoWNIB,
    NoNIB,
    MustBeArithSplit,
    ArithSplit,
    HypothesesNotMet,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceEntry {
    pub hypothesis: String,
    pub ok: bool,
    pub detail: String,
}

impl TraceEntry {
    fn new(hypothesis: impl Into<String>, ok: bool, detail: impl Into<String>) -> Self {
        TraceEntry { hypothesis: hypothesis.into(), ok, detail: detail.into() }
    }
}

/// Data certifying a verdict. Which fields are filled depends on the theorem.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Witness {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<u64>,
    /// `K <= L~ <= L`, cyclic of `l`-power degree over `K` with `e_p = l`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ltilde: Option<AbelianField>,
    /// `k <= k~ <= K` with `[K:k~] = r` and `p` ramified in `K/k~`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ktilde: Option<AbelianField>,
    /// Inertia field of `p` in `L~/k~`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inertia_field: Option<AbelianField>,
    /// `L~(zeta_s)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lprime: Option<AbelianField>,
    /// Image of `Gal(L~(zeta_l)/L~)` in `(Z/l)^x`.
    #[serde(rename = "D", skip_serializing_if = "Option::is_none")]
    pub d: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub conditions: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub det: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub minus_type: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta_order: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l1: Option<AbelianField>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k1: Option<AbelianField>,
    /// Split witness `L'` with `L = L' K` arithmetically disjoint from `K`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub split_field: Option<AbelianField>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub status: Status,
    pub theorem_id: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub trace: Vec<TraceEntry>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    /// Verdicts this one was derived from.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub derived_from: Vec<Verdict>,
}

impl Verdict {
    fn not_met(theorem: &str, trace: Vec<TraceEntry>) -> Self {
        Verdict {
            status: Status::HypothesesNotMet,
            theorem_id: theorem.into(),
            witness: None,
            trace,
            notes: Vec::new(),
            derived_from: Vec::new(),
        }
    }

    fn positive(status: Status, theorem: &str, witness: Witness, trace: Vec<TraceEntry>) -> Self {
        Verdict {
            status,
            theorem_id: theorem.into(),
            witness: Some(witness),
            trace,
            notes: Vec::new(),
            derived_from: Vec::new(),
        }
    }

    pub fn is_positive(&self) -> bool {
        self.status != Status::HypothesesNotMet
    }
}

/// `|I_p ∩ A| / |I_p ∩ B|` for `B <= A`.
fn inertia_index(ug: &UnitGroup, p: u64, a: &ElementSet, b: &ElementSet) -> u64 {
    let i = ug.inertia(p);
    (i.intersection(a).len() / i.intersection(b).len()) as u64
}

/// Smallest `n >= 1` with `n x` in `s`.
fn order_mod(g: &AbelianGroup, s: &ElementSet, x: &[u64]) -> u64 {
    let mut y = x.to_vec();
    let mut n = 1;
    while !s.contains(g, &y) {
        y = g.add(&y, x);
        n += 1;
    }
    n
}

fn is_power_of(n: u64, p: u64) -> bool {
    let mut n = n;
    while n > 1 && n % p == 0 {
        n /= p;
    }
    n == 1
}

fn odd_prime_factors(n: u64) -> Vec<u64> {
    prime_divisors(n).into_iter().filter(|&p| p != 2).collect()
}

fn check_odd_prime(ell: u64) -> Result<()> {
    if ell == 2 || !is_prime(ell) {
        return Err(Error::InvalidParameter(format!("{ell} is not an odd prime")));
    }
    Ok(())
}

fn require_real_and_tame(t: &Tower) -> Result<()> {
    if !t.middle.is_totally_real() {
        return Err(Error::PreconditionFailed("K is not totally real".into()));
    }
    let wild = t.wild_primes();
    if !wild.is_empty() {
        return Err(Error::PreconditionFailed(format!("L/K is wildly ramified at {wild:?}")));
    }
    Ok(())
}

/// `{a in (Z/l)^x : chi(a) = 1 for every chi in X_L of conductor dividing l}`.
pub fn galois_image_mod_ell(l: &AbelianField, ell: u64) -> Vec<u64> {
    let cap = l.intersection(&AbelianField::cyclotomic(ell));
    let mut d = unit_group(ell).residues_of(&cap.subgroup_at(ell));
    d.sort_unstable();
    d
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct APrimeRecord {
    pub ell: u64,
    pub p: u64,
    #[serde(rename = "D")]
    pub d: Vec<u64>,
    /// `L` linearly disjoint from `k(zeta_l)` over `k`.
    pub disjoint: bool,
    /// Admissible `g` (those with `l > g^2`) and whether `g mod l` lies in `D`.
    pub candidates: Vec<(u64, bool)>,
    pub g: Option<u64>,
    pub holds: bool,
}

/// The weakened disjointness hypothesis for the prime `l`.
pub fn condition_a_prime(t: &Tower, ell: u64, p: u64) -> Result<APrimeRecord> {
    check_odd_prime(ell)?;
    let d = galois_image_mod_ell(&t.top, ell);
    let kz = t.base.compositum(&AbelianField::cyclotomic(ell));
    let disjoint = t.top.intersection(&kz) == t.base;
    let candidates: Vec<(u64, bool)> = FERMAT_PRIMES
        .iter()
        .filter(|&&g| ell > g * g)
        .map(|&g| (g, d.binary_search(&(g % ell)).is_ok()))
        .collect();
    let g = candidates.iter().find(|c| c.1).map(|c| c.0);
    Ok(APrimeRecord { ell, p, d, disjoint, candidates, holds: disjoint && g.is_some(), g })
}

/// Step (1): a cyclic `l`-power layer `L~/K` in which `p` ramifies with index exactly `l`.
fn reduce_top(t: &Tower, p: u64, ell: u64) -> Option<AbelianField> {
    let ug = t.unit_group();
    let g = ug.group();
    let [_, xk, xl] = t.characters();
    let hk = &t.fixing()[1];
    let mut best: Option<(u64, ElementSet)> = None;
    for psi in xl.elements(g) {
        let n = order_mod(g, xk, &psi);
        if n == 1 || !is_power_of(n, ell) || best.as_ref().is_some_and(|b| b.0 <= n) {
            continue;
        }
        let z = xk.adjoin(g, &psi);
        let hz = z.annihilator(g);
        if inertia_index(&ug, p, hk, &hz) == ell {
            best = Some((n, z));
        }
    }
    best.map(|(_, z)| t.field_of(&z))
}

/// Step (2): `k <= k~ <= K` with `K/k~` cyclic of degree `r` and `p` ramified in it.
fn reduce_base(t: &Tower, p: u64, r: u64) -> Option<AbelianField> {
    let ug = t.unit_group();
    let g = ug.group();
    let [hk, hmid, _] = t.fixing();
    let cand = ug.inertia(p).intersection(hk);
    let c = cand.elements(g).find(|c| !hmid.contains(g, c) && order_mod(g, hmid, c) == r)?;
    Some(AbelianField::from_subgroup(t.modulus(), &hmid.adjoin(g, &c)))
}

struct Candidate {
    p: u64,
    ell: u64,
    q: Option<u64>,
    r: u64,
    conditions: Vec<String>,
    g: u64,
}

/// Search for `(p, l, q)` in the fixed order and build the witness.
fn nownib_core(t: &Tower, theorem: &str, trace: &mut Vec<TraceEntry>) -> Result<Option<Witness>> {
    let mut found = None;
    'outer: for (&p, ram) in t.ramification_table() {
        let odd_lower = odd_prime_factors(ram.lower);
        let ells = odd_prime_factors(ram.upper);
        if odd_lower.is_empty() {
            trace.push(TraceEntry::new(
                format!("p={p}: e_(p,K/k) has an odd prime factor"),
                false,
                format!("e_(p,K/k) = {}", ram.lower),
            ));
            continue;
        }
        if ells.is_empty() {
            trace.push(TraceEntry::new(
                format!("p={p}: e_(p,L/K) has an odd prime factor"),
                false,
                format!("e_(p,L/K) = {}", ram.upper),
            ));
            continue;
        }
        for ell in ells {
            let mut conditions = Vec::new();
            let mut g = 2;
            if t.middle.linearly_disjoint(&AbelianField::cyclotomic(ell)) {
                trace.push(TraceEntry::new(
                    format!("p={p}, l={ell}: (a) K linearly disjoint from Q(zeta_{ell})"),
                    true,
                    format!("[K(zeta_{ell}):K] = {}", ell - 1),
                ));
                conditions.push("a".to_string());
            } else {
                let rec = condition_a_prime(t, ell, p)?;
                trace.push(TraceEntry::new(
                    format!("p={p}, l={ell}: (a) K linearly disjoint from Q(zeta_{ell})"),
                    false,
                    "K meets Q(zeta_l) nontrivially".to_string(),
                ));
                trace.push(TraceEntry::new(
                    format!("p={p}, l={ell}: (a') L disjoint from k(zeta_{ell}) and g in D"),
                    rec.holds,
                    format!("disjoint={}, D={:?}, g={:?}", rec.disjoint, rec.d, rec.g),
                ));
                if !rec.holds {
                    continue;
                }
                g = rec.g.expect("holds implies g");
                conditions.push("a'".to_string());
            }
            let mut q = None;
            if ell == 3 {
                for &cand in &odd_lower {
                    let inside = zeta_q_in_3power_closure(cand, &t.top)?;
                    trace.push(TraceEntry::new(
                        format!("p={p}, l=3: (b) zeta_{cand} not in L(zeta_3^inf)"),
                        !inside,
                        format!("q={cand} divides e_(p,K/k) = {}", ram.lower),
                    ));
                    if !inside {
                        q = Some(cand);
                        break;
                    }
                }
                if q.is_none() {
                    continue;
                }
                conditions.push("b".to_string());
            }
            let r = q.unwrap_or(odd_lower[0]);
            found = Some(Candidate { p, ell, q, r, conditions, g });
            break 'outer;
        }
    }
    let Some(c) = found else { return Ok(None) };
    let ltilde = reduce_top(t, c.p, c.ell)
        .ok_or_else(|| Error::Internal(format!("{theorem}: no cyclic l-layer at p={}", c.p)))?;
    let ktilde = reduce_base(t, c.p, c.r)
        .ok_or_else(|| Error::Internal(format!("{theorem}: no degree-r layer at p={}", c.p)))?;
    let reduced = Tower::new(ktilde.clone(), t.middle.clone(), ltilde.clone())?;
    let s = reduced.degree_upper();
    trace.push(TraceEntry::new(
        "L~/K cyclic of l-power degree with e_(p,L~/K) = l",
        reduced.e_upper(c.p) == c.ell,
        format!("[L~:K] = {s}, e = {}", reduced.e_upper(c.p)),
    ));
    trace.push(TraceEntry::new(
        "K/k~ of odd prime degree r with p ramified",
        reduced.degree_lower() == c.r && reduced.e_lower(c.p) == c.r,
        format!("r = {}, e = {}", c.r, reduced.e_lower(c.p)),
    ));
    let ug = unit_group(reduced.modulus());
    let gg = ug.group();
    let [hkt, _, hlt] = reduced.fixing();
    let hf = hlt.join(gg, &ug.inertia(c.p).intersection(hkt));
    let inertia_field = AbelianField::from_subgroup(reduced.modulus(), &hf);
    let lf = (hf.len() / hlt.len()) as u64;
    trace.push(TraceEntry::new(
        "[L~:F] = r l for the inertia field F",
        lf == c.r * c.ell,
        format!("[L~:F] = {lf}"),
    ));
    let lprime = ltilde.compositum(&AbelianField::cyclotomic(s));
    let d = galois_image_mod_ell(&ltilde, c.ell);
    let mut w = Witness {
        p: Some(c.p),
        l: Some(c.ell),
        q: c.q,
        r: Some(c.r),
        s: Some(s),
        ltilde: Some(ltilde),
        ktilde: Some(ktilde),
        inertia_field: Some(inertia_field),
        lprime: Some(lprime),
        d: Some(d),
        conditions: c.conditions,
        ..Witness::default()
    };
    if c.ell > 3 {
        let det = det_certificate(c.ell, c.g)?;
        trace.push(TraceEntry::new(
            "minus-part determinant is prime to r",
            det % c.r as i64 != 0,
            format!("det = {det}, g = {}", c.g),
        ));
        w.g = Some(c.g);
        w.det = Some(det);
        if c.g == 2 {
            let ty = ideal_minus_type(c.ell, c.r)?;
            trace.push(TraceEntry::new(
                "<u_-, v_-> is not cyclic",
                !ty.is_cyclic(),
                format!("invariant factors {:?}", ty.invariant_factors),
            ));
            w.minus_type = Some(ty.invariant_factors);
        }
    } else {
        let q = c.q.expect("l = 3 has q");
        let order = theta_minus_order(3, q)?;
        trace.push(TraceEntry::new(
            "theta_- has order 3q",
            order == 3 * q,
            format!("order = {order}"),
        ));
        w.theta_order = Some(order);
    }
    Ok(Some(w))
}

/// No WNIB for `L/K` when some prime ramifies in both layers with an odd
/// factor below and an odd prime `l` above, subject to the disjointness
/// condition on `l` (or its weakened form) and, for `l = 3`, condition (b).
pub fn check_nownib1(t: &Tower) -> Result<Verdict> {
    require_real_and_tame(t)?;
    let mut trace = vec![
        TraceEntry::new("K totally real", true, ""),
        TraceEntry::new("L/K tame", true, "p does not divide e_(p,L/K) for every ramified p"),
    ];
    match nownib_core(t, "nownib1", &mut trace)? {
        Some(w) => Ok(Verdict::positive(Status::NoWNIB, "nownib1", w, trace)),
        None => {
            if t.ramification_table().is_empty() {
                trace.push(TraceEntry::new("some prime ramifies in L/k", false, ""));
            }
            Ok(Verdict::not_met("nownib1", trace))
        }
    }
}

/// The prime-degree variant: `[L:K] = l` and some `p` totally ramified in `L/K`.
pub fn check_nownib2(t: &Tower) -> Result<Verdict> {
    let n = t.degree_upper();
    if n == 2 || !is_prime(n) {
        return Err(Error::PreconditionFailed(format!("[L:K] = {n} is not an odd prime")));
    }
    require_real_and_tame(t)?;
    let mut trace = vec![
        TraceEntry::new("[L:K] odd prime", true, format!("[L:K] = {n}")),
        TraceEntry::new("K totally real", true, ""),
        TraceEntry::new("L/K tame", true, ""),
    ];
    let totally: Vec<u64> = t
        .ramification_table()
        .iter()
        .filter(|(_, r)| r.upper == n)
        .map(|(p, _)| *p)
        .collect();
    trace.push(TraceEntry::new(
        "some p totally ramified in L/K",
        !totally.is_empty(),
        format!("{totally:?}"),
    ));
    if totally.is_empty() {
        return Ok(Verdict::not_met("nownib2", trace));
    }
    // with [L:K] prime, e_(p,L/K) is 1 or l, so the search below only sees totally ramified p
    match nownib_core(t, "nownib2", &mut trace)? {
        Some(w) => Ok(Verdict::positive(Status::NoWNIB, "nownib2", w, trace)),
        None => Ok(Verdict::not_met("nownib2", trace)),
    }
}

/// Lift a nownib1 verdict for cyclic `L/K` of degree `l^m` to `L1/K1` with
/// `L <= L1 <= L(zeta_l)`, `K <= K1 <= K(zeta_l)` and `[L1:L] = [K1:K]`.
pub fn check_corollary_lift(t: &Tower, l1: &AbelianField, k1: &AbelianField) -> Result<Verdict> {
    let (l, k) = (&t.top, &t.middle);
    if !l1.contains(l) || !k1.contains(k) {
        return Err(Error::PreconditionFailed("need L <= L1 and K <= K1".into()));
    }
    let (dl, dk) = (l1.degree() / l.degree(), k1.degree() / k.degree());
    if dl != dk {
        return Err(Error::PreconditionFailed(format!("[L1:L] = {dl} but [K1:K] = {dk}")));
    }
    let n = t.degree_upper();
    let primes = prime_divisors(n);
    let cyclic = quotient_structure(t.unit_group().group(), &t.characters()[2], &t.characters()[1])?
        .is_cyclic();
    if primes.len() != 1 || primes[0] == 2 || !cyclic {
        return Err(Error::PreconditionFailed(format!(
            "L/K must be cyclic of odd prime power degree, [L:K] = {n}"
        )));
    }
    let ell = primes[0];
    let zl = AbelianField::cyclotomic(ell);
    if !l.compositum(&zl).contains(l1) || !k.compositum(&zl).contains(k1) {
        return Err(Error::PreconditionFailed(format!(
            "need L1 <= L(zeta_{ell}) and K1 <= K(zeta_{ell})"
        )));
    }
    let base = check_nownib1(t)?;
    let trace = vec![
        TraceEntry::new("L/K cyclic of degree l^m", true, format!("[L:K] = {n}, l = {ell}")),
        TraceEntry::new("[L1:L] = [K1:K]", true, format!("{dl}")),
        TraceEntry::new("L1 = L K1", l.compositum(k1) == *l1, ""),
        TraceEntry::new(
            "L arithmetically disjoint from K1 over K",
            k1.ramified_primes().iter().all(|&p| p == ell || k1.ramification_index(p) == k.ramification_index(p)),
            format!("K1/K ramified only above {ell}"),
        ),
        TraceEntry::new("nownib1 holds for L/K", base.status == Status::NoWNIB, ""),
    ];
    if base.status != Status::NoWNIB {
        let mut v = Verdict::not_met("nownib1-cor", trace);
        v.derived_from.push(base);
        return Ok(v);
    }
    let mut w = base.witness.clone().expect("positive verdict has witness");
    w.l1 = Some(l1.clone());
    w.k1 = Some(k1.clone());
    let mut v = Verdict::positive(Status::NoWNIB, "nownib1-cor", w, trace);
    v.derived_from.push(base);
    Ok(v)
}

/// A WNIB forces disjoint ramification. Positive (NoWNIB) exactly when the
/// hypotheses hold and `T` is not disjointly ramified.
pub fn wnib_forces_disjoint_ram(t: &Tower) -> Result<Verdict> {
    let total = t.top.degree() / t.base.degree();
    if total % 2 == 0 {
        return Err(Error::PreconditionFailed(format!("[L:k] = {total} is even")));
    }
    if !t.base.is_totally_real() {
        return Err(Error::PreconditionFailed("k is not totally real".into()));
    }
    let wild = t.wild_primes();
    if !wild.is_empty() {
        return Err(Error::PreconditionFailed(format!("L/K is wildly ramified at {wild:?}")));
    }
    let mut trace = vec![
        TraceEntry::new("[L:k] odd", true, format!("{total}")),
        TraceEntry::new("k totally real", true, ""),
        TraceEntry::new("L/K tame", true, ""),
    ];
    let n = t.degree_upper();
    let mut ok = true;
    for ell in prime_divisors(n) {
        let d = t.middle.linearly_disjoint(&AbelianField::cyclotomic(ell));
        trace.push(TraceEntry::new(format!("[K(zeta_{ell}):K] = {}", ell - 1), d, ""));
        ok &= d;
    }
    let cond_a = n % 3 != 0;
    trace.push(TraceEntry::new("(a) 3 does not divide [L:K]", cond_a, format!("[L:K] = {n}")));
    let mut cond_b = true;
    if !cond_a {
        for q in odd_prime_factors(t.degree_lower()) {
            let inside = zeta_q_in_3power_closure(q, &t.top)?;
            trace.push(TraceEntry::new(format!("(b) zeta_{q} not in L(zeta_3^inf)"), !inside, ""));
            cond_b &= !inside;
        }
    }
    ok &= cond_a || cond_b;
    if !ok {
        return Ok(Verdict::not_met("wnib-implies-disjoint-ram", trace));
    }
    let (disjoint, both) = t.has_disjoint_ramification();
    trace.push(TraceEntry::new(
        "L/K/k has disjoint ramification",
        disjoint,
        format!("primes ramified in both layers: {both:?}"),
    ));
    if disjoint {
        let mut v = Verdict::not_met("wnib-implies-disjoint-ram", trace);
        v.notes.push("no obstruction from this proposition".into());
        return Ok(v);
    }
    let base = check_nownib1(t)?;
    let w = base.witness.clone().ok_or_else(|| {
        Error::Internal("hypotheses hold with a common ramified prime but nownib1 failed".into())
    })?;
    let mut v = Verdict::positive(Status::NoWNIB, "wnib-implies-disjoint-ram", w, trace);
    v.notes.push("any WNIB forces disjoint ramification; this tower has none".into());
    v.derived_from.push(base);
    Ok(v)
}

/// Remove `Q(zeta_l)` from `F(zeta_l)`: keep the characters whose `l`-component
/// has `l`-power order.
pub fn remove_cyclotomic_ell(f: &AbelianField, ell: u64) -> AbelianField {
    let fz = f.compositum(&AbelianField::cyclotomic(ell));
    let m = fz.conductor();
    let ug = unit_group(m);
    let g = ug.group();
    let slots = ug.slots(ell);
    let x = fz.characters_at(m);
    let z = ElementSet::from_indices(
        g,
        x.indices().iter().copied().filter(|&i| {
            let w = g.element(i);
            slots.clone().all(|j| {
                let o = g.orders()[j];
                is_power_of(o / crate::arith::gcd(w[j], o), ell)
            })
        }),
    );
    AbelianField::from_characters(m, &z)
}

/// Whether condition (b) fails for the prime 3, checked either against `L`
/// or, per factor, against each 3-power cyclic factor `L_i`.
fn split_condition_b(t: &Tower, per_factor: bool, trace: &mut Vec<TraceEntry>) -> Result<bool> {
    let qs = odd_prime_factors(t.middle.degree());
    let tops: Vec<AbelianField> = if per_factor {
        cyclic_prime_power_decomposition(t)?
            .into_iter()
            .filter(|f| f.prime == 3)
            .map(|f| f.field)
            .collect()
    } else {
        vec![t.top.clone()]
    };
    let mut ok = true;
    for top in &tops {
        for &q in &qs {
            let inside = zeta_q_in_3power_closure(q, top)?;
            trace.push(TraceEntry::new(
                format!("(b) zeta_{q} not in F(zeta_3^inf), F of conductor {}", top.conductor()),
                !inside,
                "",
            ));
            ok &= !inside;
        }
    }
    Ok(ok)
}

/// For `k = Q`: `L/K` has an NIB iff `L/K/Q` is arithmetically split.
pub fn nib_split_decision(t: &Tower) -> Result<Verdict> {
    nib_split_decision_with(t, false)
}

/// As [`nib_split_decision`], optionally using the per-factor form of (b).
pub fn nib_split_decision_with(t: &Tower, per_factor_b: bool) -> Result<Verdict> {
    const ID: &str = "nib-split";
    if !t.base.is_rational() {
        return Err(Error::PreconditionFailed("base field must be Q".into()));
    }
    if t.top.degree() % 2 == 0 {
        return Err(Error::PreconditionFailed(format!("[L:Q] = {} is even", t.top.degree())));
    }
    let wild = t.wild_primes();
    if !wild.is_empty() {
        return Err(Error::PreconditionFailed(format!("L/K is wildly ramified at {wild:?}")));
    }
    let n = t.degree_upper();
    let mut trace = vec![
        TraceEntry::new("[L:Q] odd", true, format!("{}", t.top.degree())),
        TraceEntry::new("L/K tame", true, ""),
    ];
    // the split direction needs neither (a) nor (b)
    if let Some(lp) = canonical_split(t)? {
        trace.push(TraceEntry::new(
            "L/K/Q arithmetically split",
            true,
            format!("L' of conductor {}, degree {}", lp.conductor(), lp.degree()),
        ));
        let w = Witness { split_field: Some(lp), ..Witness::default() };
        let mut v = Verdict::positive(Status::ArithSplit, ID, w, trace);
        v.notes.push("an NIB exists: L'/Q has one and L = L'K with L' arithmetically disjoint from K".into());
        return Ok(v);
    }
    trace.push(TraceEntry::new("L/K/Q arithmetically split", false, ""));
    let cond_a = n % 3 != 0;
    trace.push(TraceEntry::new("(a) 3 does not divide [L:K]", cond_a, format!("[L:K] = {n}")));
    if !cond_a && !split_condition_b(t, per_factor_b, &mut trace)? {
        return Ok(Verdict::not_met(ID, trace));
    }
    let mut v = Verdict::positive(Status::NoNIB, ID, Witness::default(), Vec::new());
    let mut witness = None;
    for f in cyclic_prime_power_decomposition(t)? {
        let ell = f.prime;
        let ti = Tower::new(t.base.clone(), t.middle.clone(), f.field.clone())?;
        let label = format!("factor l={ell}^{} of conductor {}", f.exponent, f.field.conductor());
        let split = canonical_split(&ti)?.is_some();
        trace.push(TraceEntry::new(format!("{label}: arithmetically split"), split, ""));
        if split {
            continue;
        }
        let (disjoint, both) = ti.has_disjoint_ramification();
        trace.push(TraceEntry::new(
            format!("{label}: disjoint ramification"),
            disjoint,
            format!("common ramified primes {both:?}"),
        ));
        if disjoint {
            v.notes.push(format!(
                "{label}: disjointly ramified but not split, so it has no NIB"
            ));
            continue;
        }
        let kp = remove_cyclotomic_ell(&t.middle, ell);
        let lp = remove_cyclotomic_ell(&f.field, ell);
        let reduced = Tower::new(AbelianField::rational(), kp.clone(), lp.clone())?;
        let survivors: Vec<u64> = both
            .iter()
            .copied()
            .filter(|&p| reduced.e_lower(p) > 1 && reduced.e_upper(p) > 1)
            .collect();
        trace.push(TraceEntry::new(
            format!("{label}: common ramified prime survives in L'/K'/Q"),
            !survivors.is_empty(),
            format!(
                "K' conductor {}, L' conductor {}, primes {survivors:?}",
                kp.conductor(),
                lp.conductor()
            ),
        ));
        let zl = AbelianField::cyclotomic(ell);
        let lift = check_corollary_lift(&reduced, &f.field.compositum(&zl), &t.middle.compositum(&zl))?;
        trace.push(TraceEntry::new(
            format!("{label}: L_i(zeta_l)/K(zeta_l) has no WNIB"),
            lift.status == Status::NoWNIB,
            "",
        ));
        if lift.status == Status::NoWNIB && witness.is_none() {
            witness = lift.witness.clone();
        }
        v.derived_from.push(lift);
    }
    v.witness = Some(witness.unwrap_or_default());
    v.trace = trace;
    v.notes.push("L/K/Q is not arithmetically split, so no NIB exists".into());
    Ok(v)
}

/// Re-verify the structural claims of a nownib witness against `t`.
pub fn check_witness(t: &Tower, w: &Witness) -> Result<bool> {
    let (Some(p), Some(ell), Some(r), Some(lt), Some(kt)) = (w.p, w.l, w.r, &w.ltilde, &w.ktilde) else {
        return Ok(false);
    };
    if !(t.top.contains(lt) && lt.contains(&t.middle) && t.middle.contains(kt) && kt.contains(&t.base)) {
        return Ok(false);
    }
    let red = Tower::new(kt.clone(), t.middle.clone(), lt.clone())?;
    let ug = red.unit_group();
    let cyclic = quotient_structure(ug.group(), &red.characters()[2], &red.characters()[1])?.is_cyclic();
    let mut ok = cyclic
        && is_power_of(red.degree_upper(), ell)
        && red.e_upper(p) == ell
        && red.degree_lower() == r
        && red.e_lower(p) == r
        && t.e_lower(p) % r == 0
        && t.e_upper(p) % ell == 0;
    if let Some(d) = &w.d {
        ok &= *d == galois_image_mod_ell(lt, ell);
    }
    if let Some(f) = &w.inertia_field {
        ok &= lt.contains(f) && f.contains(kt) && lt.degree() / f.degree() == r * ell;
    }
    Ok(ok)
}
