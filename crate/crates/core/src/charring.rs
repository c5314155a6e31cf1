//! Finite-dimensional graded-commutative ring models of even cohomology,
//! and the characteristic classes living in them: Chern character
//! components, Todd and A-hat classes, the Witten class with q-series
//! coefficients, and genus integration.
//!
//! Specs are purely formal: a ring, a total Chern class, and an integration
//! functional. Nothing geometric is computed, which lets tests build
//! adversarial inputs (ch_2 = 0 with ch_4 != 0) that no small projective
//! variety realizes.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::eisenstein::{bernoulli, eisenstein_q};
use crate::error::{Error, Result};
use crate::qseries::QSeries;
use crate::rational::{binomial, factorial, rat, ratio, Rational};
use crate::scalar::Coeff;

/// A graded-commutative ring on a finite homogeneous basis of even degrees,
/// with an integration functional supported in the top degree. Basis index
/// 0 is the unit.
#[derive(Clone, Debug)]
pub struct RingSpec {
    names: Vec<String>,
    degrees: Vec<usize>,
    /// table[i][j] = basis_i * basis_j, sparse
    table: Vec<Vec<Vec<(usize, Rational)>>>,
    top_degree: usize,
    /// integration weights on top-degree basis elements
    integration: BTreeMap<usize, Rational>,
}

impl RingSpec {
    pub fn new(
        names: Vec<String>,
        degrees: Vec<usize>,
        table: Vec<Vec<Vec<(usize, Rational)>>>,
        top_degree: usize,
        integration: Vec<(usize, Rational)>,
    ) -> Result<Self> {
        let n = names.len();
        if n == 0 || degrees.len() != n || table.len() != n || table.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidSpec("ring tables have inconsistent shape".into()));
        }
        if degrees[0] != 0 {
            return Err(Error::InvalidSpec("basis element 0 must be the unit in degree 0".into()));
        }
        if degrees.iter().any(|d| d % 2 != 0) {
            return Err(Error::InvalidSpec("ring degrees must be even".into()));
        }
        if degrees.iter().any(|&d| d > top_degree) {
            return Err(Error::InvalidSpec("basis degree exceeds top_degree".into()));
        }
        let spec = RingSpec {
            names,
            degrees,
            table,
            top_degree,
            integration: integration.into_iter().collect(),
        };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        let n = self.dim();
        // unit laws
        for j in 0..n {
            let prod = &self.table[0][j];
            if prod.len() != 1 || prod[0].0 != j || !prod[0].1.is_one() {
                return Err(Error::InvalidSpec(format!(
                    "unit law fails: 1 * {} != {}",
                    self.names[j], self.names[j]
                )));
            }
        }
        // graded commutativity (all degrees even: plain symmetry) and
        // degree additivity with truncation above top_degree
        for i in 0..n {
            for j in 0..n {
                if !sparse_eq(&self.table[i][j], &self.table[j][i], n) {
                    return Err(Error::InvalidSpec(format!(
                        "commutativity fails on ({}, {})",
                        self.names[i], self.names[j]
                    )));
                }
                let want = self.degrees[i] + self.degrees[j];
                for (k, c) in &self.table[i][j] {
                    if c.is_zero() {
                        continue;
                    }
                    if self.degrees[*k] != want || want > self.top_degree {
                        return Err(Error::InvalidSpec(format!(
                            "product {} * {} lands outside degree {}",
                            self.names[i], self.names[j], want
                        )));
                    }
                }
            }
        }
        // associativity on all basis triples
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let mut lhs = Vec::new();
                    for (m, c) in &self.table[i][j] {
                        for (t, d) in &self.table[*m][k] {
                            lhs.push((*t, c * d));
                        }
                    }
                    let mut rhs = Vec::new();
                    for (m, c) in &self.table[j][k] {
                        for (t, d) in &self.table[i][*m] {
                            rhs.push((*t, c * d));
                        }
                    }
                    if !sparse_eq(&lhs, &rhs, n) {
                        return Err(Error::InvalidSpec(format!(
                            "associativity fails on ({}, {}, {})",
                            self.names[i], self.names[j], self.names[k]
                        )));
                    }
                }
            }
        }
        // integration supported in top degree
        for (k, _) in &self.integration {
            if self.degrees[*k] != self.top_degree {
                return Err(Error::InvalidSpec(format!(
                    "integration weight on {} which is not top degree",
                    self.names[*k]
                )));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn degree(&self, i: usize) -> usize {
        self.degrees[i]
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn top_degree(&self) -> usize {
        self.top_degree
    }

    pub fn basis_product(&self, i: usize, j: usize) -> &[(usize, Rational)] {
        &self.table[i][j]
    }

    pub fn integration_weight(&self, i: usize) -> Rational {
        self.integration.get(&i).cloned().unwrap_or_else(Rational::zero)
    }
}

fn sparse_eq(a: &[(usize, Rational)], b: &[(usize, Rational)], n: usize) -> bool {
    let mut da = vec![Rational::zero(); n];
    for (i, c) in a {
        da[*i] += c;
    }
    let mut db = vec![Rational::zero(); n];
    for (i, c) in b {
        db[*i] += c;
    }
    da == db
}

/// An element of a RingSpec with coefficients in a scalar ring S (exact
/// rationals or q-series).
#[derive(Clone, Debug, PartialEq)]
pub struct MixedClass<S: Coeff> {
    coeffs: BTreeMap<usize, S>,
}

impl<S: Coeff> MixedClass<S> {
    pub fn zero() -> Self {
        MixedClass { coeffs: BTreeMap::new() }
    }

    pub fn from_coeffs(coeffs: BTreeMap<usize, S>) -> Self {
        let mut c = MixedClass { coeffs };
        c.prune();
        c
    }

    pub fn term(idx: usize, s: S) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(idx, s);
        let mut c = MixedClass { coeffs };
        c.prune();
        c
    }

    fn prune(&mut self) {
        self.coeffs.retain(|_, v| !v.vanishes());
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &BTreeMap<usize, S> {
        &self.coeffs
    }

    pub fn coeff(&self, idx: usize) -> Option<&S> {
        self.coeffs.get(&idx)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut coeffs = self.coeffs.clone();
        for (k, v) in &other.coeffs {
            match coeffs.get_mut(k) {
                Some(e) => *e = e.add(v),
                None => {
                    coeffs.insert(*k, v.clone());
                }
            }
        }
        let mut c = MixedClass { coeffs };
        c.prune();
        c
    }

    pub fn neg(&self) -> Self {
        MixedClass { coeffs: self.coeffs.iter().map(|(k, v)| (*k, v.neg())).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale_rat(&self, r: &Rational) -> Self {
        let mut c = MixedClass {
            coeffs: self.coeffs.iter().map(|(k, v)| (*k, v.scale(r))).collect(),
        };
        c.prune();
        c
    }

    pub fn scale(&self, s: &S) -> Self {
        let mut c = MixedClass {
            coeffs: self.coeffs.iter().map(|(k, v)| (*k, v.mul(s))).collect(),
        };
        c.prune();
        c
    }

    pub fn mul(&self, other: &Self, ring: &RingSpec) -> Self {
        let mut acc: BTreeMap<usize, S> = BTreeMap::new();
        for (i, a) in &self.coeffs {
            for (j, b) in &other.coeffs {
                let ab = a.mul(b);
                for (k, c) in ring.basis_product(*i, *j) {
                    let term = ab.scale(c);
                    match acc.get_mut(k) {
                        Some(e) => *e = e.add(&term),
                        None => {
                            acc.insert(*k, term);
                        }
                    }
                }
            }
        }
        let mut c = MixedClass { coeffs: acc };
        c.prune();
        c
    }

    /// The homogeneous piece in the given cohomological degree.
    pub fn component(&self, degree: usize, ring: &RingSpec) -> Self {
        MixedClass {
            coeffs: self
                .coeffs
                .iter()
                .filter(|(k, _)| ring.degree(**k) == degree)
                .map(|(k, v)| (*k, v.clone()))
                .collect(),
        }
    }

    /// exp of a class with vanishing degree-0 part (nilpotent), so the sum
    /// is finite. `one` supplies the scalar 1 (q-series need an order).
    pub fn exp(&self, ring: &RingSpec, one: S) -> Result<Self> {
        if self.coeffs.contains_key(&0) {
            return Err(Error::Domain("class exp requires vanishing degree-0 part".into()));
        }
        let mut acc = MixedClass::term(0, one);
        let mut pow = acc.clone();
        let mut j = 1u64;
        loop {
            pow = pow.mul(self, ring);
            if pow.is_zero() {
                break;
            }
            acc = acc.add(&pow.scale_rat(&Rational::new(1.into(), factorial(j))));
            j += 1;
            if j > ring.dim() as u64 + 2 {
                // positive-degree classes are nilpotent; this cannot happen
                return Err(Error::Domain("exp failed to terminate".into()));
            }
        }
        Ok(acc)
    }

    pub fn display(&self, ring: &RingSpec) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.coeffs
            .iter()
            .map(|(k, v)| {
                if *k == 0 {
                    v.to_display()
                } else {
                    format!("({})*{}", v.to_display(), ring.name(*k))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl MixedClass<Rational> {
    /// Lift rational coefficients into q-series of the given order.
    pub fn lift_qseries(&self, order: usize) -> MixedClass<QSeries> {
        MixedClass {
            coeffs: self
                .coeffs
                .iter()
                .map(|(k, v)| (*k, QSeries::constant(v.clone(), order)))
                .collect(),
        }
    }
}

impl MixedClass<QSeries> {
    /// The q^0 part, as a rational class.
    pub fn q_constant_term(&self) -> MixedClass<Rational> {
        let mut c = MixedClass {
            coeffs: self.coeffs.iter().map(|(k, v)| (*k, v.coeff(0))).collect(),
        };
        c.prune();
        c
    }
}

/// A formal manifold: ring, complex dimension (= rank of the tangent
/// bundle), total Chern class, and the ch_2-trivialization flag.
#[derive(Clone, Debug)]
pub struct ManifoldSpec {
    pub ring: RingSpec,
    pub complex_dimension: usize,
    pub total_chern: MixedClass<Rational>,
    pub ch2_trivialized: bool,
}

impl ManifoldSpec {
    pub fn new(
        ring: RingSpec,
        complex_dimension: usize,
        total_chern: MixedClass<Rational>,
        ch2_trivialized: bool,
    ) -> Result<Self> {
        // degree-0 part must be exactly 1
        match total_chern.coeff(0) {
            Some(c) if c.is_one() => {}
            _ => return Err(Error::InvalidSpec("total Chern class must start with 1".into())),
        }
        for (k, v) in total_chern.coeffs() {
            if v.is_zero() {
                continue;
            }
            let d = ring.degree(*k);
            if d > 2 * complex_dimension {
                return Err(Error::InvalidSpec(format!(
                    "c_{} present but rank is {}",
                    d / 2,
                    complex_dimension
                )));
            }
        }
        let spec = ManifoldSpec { ring, complex_dimension, total_chern, ch2_trivialized };
        if spec.ch2_trivialized {
            let ch = chern_character(&spec, 2);
            if !ch[2].is_zero() {
                return Err(Error::Ch2NotTrivial { ch2: ch[2].display(&spec.ring) });
            }
        }
        Ok(spec)
    }

    pub fn chern_class(&self, i: usize) -> MixedClass<Rational> {
        self.total_chern.component(2 * i, &self.ring)
    }
}

/// Chern character components ch_0 .. ch_max_k of the tangent bundle,
/// ch_m = p_m / m! with p_m the Newton power sums of the Chern roots:
/// p_m = c_1 p_{m-1} - c_2 p_{m-2} + ... + (-1)^{m-1} m c_m.
pub fn chern_character(spec: &ManifoldSpec, max_k: usize) -> Vec<MixedClass<Rational>> {
    let ring = &spec.ring;
    let mut out = Vec::with_capacity(max_k + 1);
    out.push(MixedClass::term(0, rat(spec.complex_dimension as i64)));
    let mut p: Vec<MixedClass<Rational>> = vec![MixedClass::zero()]; // p_0 unused
    for m in 1..=max_k {
        let mut pm = spec.chern_class(m).scale_rat(&rat(m as i64));
        if (m - 1) % 2 == 1 {
            pm = pm.neg();
        }
        for i in 1..m {
            let term = spec.chern_class(i).mul(&p[m - i], ring);
            if (i - 1) % 2 == 0 {
                pm = pm.add(&term);
            } else {
                pm = pm.sub(&term);
            }
        }
        p.push(pm.clone());
        out.push(pm.scale_rat(&Rational::new(1.into(), factorial(m as u64))));
    }
    out
}

/// log Td = ch_1/2 + sum_{k>=1} (-B_{2k}/2k) ch_{2k}; the k-range is capped
/// by the top degree of the ring.
pub fn todd_class(spec: &ManifoldSpec) -> MixedClass<Rational> {
    let max_m = spec.ring.top_degree() / 2;
    let ch = chern_character(spec, max_m);
    let mut log_td = ch[1].scale_rat(&ratio(1, 2));
    let mut k = 1;
    while 2 * k <= max_m {
        let coeff = -bernoulli(2 * k) / rat(2 * k as i64);
        log_td = log_td.add(&ch[2 * k].scale_rat(&coeff));
        k += 1;
    }
    log_td.exp(&spec.ring, Rational::one()).expect("log Td has no degree-0 part")
}

/// A-hat = exp(sum_{k>=1} (-B_{2k}/2k) ch_{2k}); equals e^{-c_1/2} Td
/// exactly (tested, not assumed).
pub fn a_hat_class(spec: &ManifoldSpec) -> MixedClass<Rational> {
    let max_m = spec.ring.top_degree() / 2;
    let ch = chern_character(spec, max_m);
    let mut log_ahat = MixedClass::zero();
    let mut k = 1;
    while 2 * k <= max_m {
        let coeff = -bernoulli(2 * k) / rat(2 * k as i64);
        log_ahat = log_ahat.add(&ch[2 * k].scale_rat(&coeff));
        k += 1;
    }
    log_ahat.exp(&spec.ring, Rational::one()).expect("log A-hat has no degree-0 part")
}

/// Wit = exp( sum_{k>=2} e_{2k}(q) ch_{2k}(TX) ); the k = 1 term (ch_2) is
/// excluded exactly as in the defining sum.
pub fn witten_class(spec: &ManifoldSpec, q_order: usize) -> Result<MixedClass<QSeries>> {
    let max_m = spec.ring.top_degree() / 2;
    let ch = chern_character(spec, max_m);
    let mut exponent: MixedClass<QSeries> = MixedClass::zero();
    let mut k = 2;
    while 2 * k <= max_m {
        let series = eisenstein_q(k as u32, q_order)?;
        let lifted = ch[2 * k].lift_qseries(q_order);
        exponent = exponent.add(&lifted.scale(&series));
        k += 1;
    }
    exponent.exp(&spec.ring, QSeries::one(q_order))
}

/// The logarithm of the Witten class: sum_{k>=2} e_{2k}(q) ch_{2k}(TX).
pub fn log_witten_class(spec: &ManifoldSpec, q_order: usize) -> Result<MixedClass<QSeries>> {
    let max_m = spec.ring.top_degree() / 2;
    let ch = chern_character(spec, max_m);
    let mut exponent: MixedClass<QSeries> = MixedClass::zero();
    let mut k = 2;
    while 2 * k <= max_m {
        let series = eisenstein_q(k as u32, q_order)?;
        exponent = exponent.add(&ch[2 * k].lift_qseries(q_order).scale(&series));
        k += 1;
    }
    Ok(exponent)
}

/// log of e^{-c_1/2} Td = sum_{k>=1} (-B_{2k}/2k) ch_{2k}.
pub fn log_ahat_class(spec: &ManifoldSpec) -> MixedClass<Rational> {
    let max_m = spec.ring.top_degree() / 2;
    let ch = chern_character(spec, max_m);
    let mut log = MixedClass::zero();
    let mut k = 1;
    while 2 * k <= max_m {
        log = log.add(&ch[2 * k].scale_rat(&(-bernoulli(2 * k) / rat(2 * k as i64))));
        k += 1;
    }
    log
}

/// Verifies the limit identity q->0 of the Witten class:
/// q^0(Wit) = e^{-c_1/2} Td, demanding ch_2 = 0 first (the identity skips
/// the k = 1 term on both sides).
pub fn witten_limit_check(spec: &ManifoldSpec) -> Result<bool> {
    let ch = chern_character(spec, 2);
    if !ch[2].is_zero() {
        return Err(Error::Ch2NotTrivial { ch2: ch[2].display(&spec.ring) });
    }
    let q0 = witten_class(spec, 0)?.q_constant_term();
    let c1 = spec.chern_class(1);
    let e_minus_half_c1 = c1
        .scale_rat(&ratio(-1, 2))
        .exp(&spec.ring, Rational::one())
        .expect("c_1 has positive degree");
    let rhs = e_minus_half_c1.mul(&todd_class(spec), &spec.ring);
    Ok(q0 == rhs)
}

/// Apply the integration functional to the top-degree component. None means
/// the class has no top-degree part (integral zero).
pub fn integrate<S: Coeff>(cls: &MixedClass<S>, spec: &ManifoldSpec) -> Option<S> {
    let mut acc: Option<S> = None;
    for (k, v) in cls.coeffs() {
        let w = spec.ring.integration_weight(*k);
        if w.is_zero() {
            continue;
        }
        let term = v.scale(&w);
        acc = Some(match acc {
            None => term,
            Some(a) => a.add(&term),
        });
    }
    acc
}

/// The Witten genus: integral of the Witten class, padded to q_order.
pub fn witten_genus(spec: &ManifoldSpec, q_order: usize) -> Result<QSeries> {
    let wit = witten_class(spec, q_order)?;
    Ok(integrate(&wit, spec).unwrap_or_else(|| QSeries::zero(q_order)).truncated(q_order))
}

/// The Todd genus: integral of the Todd class.
pub fn todd_genus(spec: &ManifoldSpec) -> Rational {
    integrate(&todd_class(spec), spec).unwrap_or_else(Rational::zero)
}

/// The A-hat genus.
pub fn a_hat_genus(spec: &ManifoldSpec) -> Rational {
    integrate(&a_hat_class(spec), spec).unwrap_or_else(Rational::zero)
}

// ---- builders ----------------------------------------------------------

/// H^even(P^n): Q[h]/(h^{n+1}), deg h = 2, integral of h^n = 1; the
/// tangent class is (1+h)^{n+1} truncated.
pub fn projective_space(n: usize) -> ManifoldSpec {
    let ring = power_ring("h", n, 1).expect("P^n ring is valid");
    let mut coeffs = BTreeMap::new();
    for i in 0..=n {
        coeffs.insert(i, Rational::from_integer(binomial(n as u64 + 1, i as u64)));
    }
    ManifoldSpec::new(ring, n, MixedClass::from_coeffs(coeffs), false)
        .expect("P^n spec is valid")
}

/// Q[g]/(g^{n+1}) with deg g = 2*step and integral of g^n = 1.
pub fn power_ring(gen_name: &str, n: usize, step: usize) -> Result<RingSpec> {
    let names = (0..=n)
        .map(|i| match i {
            0 => "1".to_string(),
            1 => gen_name.to_string(),
            _ => format!("{gen_name}^{i}"),
        })
        .collect();
    let degrees = (0..=n).map(|i| 2 * step * i).collect();
    let mut table = vec![vec![Vec::new(); n + 1]; n + 1];
    for i in 0..=n {
        for j in 0..=n {
            if i + j <= n {
                table[i][j] = vec![(i + j, rat(1))];
            }
        }
    }
    RingSpec::new(names, degrees, table, 2 * step * n, vec![(n, rat(1))])
}

/// Tensor product of rings (all degrees even, so no signs).
pub fn tensor_ring(a: &RingSpec, b: &RingSpec) -> Result<RingSpec> {
    let nb = b.dim();
    let idx = |i: usize, j: usize| i * nb + j;
    let mut names = Vec::new();
    let mut degrees = Vec::new();
    for i in 0..a.dim() {
        for j in 0..nb {
            names.push(match (i, j) {
                (0, 0) => "1".to_string(),
                (_, 0) => a.name(i).to_string(),
                (0, _) => b.name(j).to_string(),
                _ => format!("{}*{}", a.name(i), b.name(j)),
            });
            degrees.push(a.degree(i) + b.degree(j));
        }
    }
    let dim = a.dim() * nb;
    let mut table = vec![vec![Vec::new(); dim]; dim];
    for i1 in 0..a.dim() {
        for j1 in 0..nb {
            for i2 in 0..a.dim() {
                for j2 in 0..nb {
                    let mut entries = Vec::new();
                    for (ka, ca) in a.basis_product(i1, i2) {
                        for (kb, cb) in b.basis_product(j1, j2) {
                            entries.push((idx(*ka, *kb), ca * cb));
                        }
                    }
                    table[idx(i1, j1)][idx(i2, j2)] = entries;
                }
            }
        }
    }
    let top = a.top_degree() + b.top_degree();
    let mut integration = Vec::new();
    for i in 0..a.dim() {
        for j in 0..nb {
            let w = a.integration_weight(i) * b.integration_weight(j);
            if !w.is_zero() {
                integration.push((idx(i, j), w));
            }
        }
    }
    RingSpec::new(names, degrees, table, top, integration)
}

/// Tensor of classes into the tensor ring.
pub fn tensor_class<S: Coeff>(
    _a: &RingSpec,
    b: &RingSpec,
    ca: &MixedClass<S>,
    cb: &MixedClass<S>,
) -> MixedClass<S> {
    let nb = b.dim();
    let mut coeffs = BTreeMap::new();
    for (i, x) in ca.coeffs() {
        for (j, y) in cb.coeffs() {
            coeffs.insert(i * nb + j, x.mul(y));
        }
    }
    MixedClass::from_coeffs(coeffs)
}

/// The product manifold: tensor ring, product Chern class, summed
/// dimension.
pub fn product_spec(a: &ManifoldSpec, b: &ManifoldSpec) -> Result<ManifoldSpec> {
    let ring = tensor_ring(&a.ring, &b.ring)?;
    let chern = tensor_class(&a.ring, &b.ring, &a.total_chern, &b.total_chern);
    ManifoldSpec::new(
        ring,
        a.complex_dimension + b.complex_dimension,
        chern,
        a.ch2_trivialized && b.ch2_trivialized,
    )
}

/// A trivial-tangent-bundle spec of the given dimension on the P^n ring
/// (so the integral of 1 is 0 for n > 0).
pub fn trivial_bundle_spec(n: usize) -> ManifoldSpec {
    let ring = power_ring("h", n.max(1), 1).expect("ring is valid");
    ManifoldSpec::new(ring, n.max(1), MixedClass::term(0, rat(1)), true)
        .expect("trivial spec is valid")
}

/// Formal 4-fold with a single degree-8 class u, ch_4 = u (so c_4 = -6u),
/// c_1 = 0, ch_2 = 0, integral of u = 1.
pub fn formal_fourfold() -> ManifoldSpec {
    let ring = power_ring("u", 1, 4).expect("ring is valid");
    let mut c = BTreeMap::new();
    c.insert(0, rat(1));
    c.insert(1, rat(-6));
    ManifoldSpec::new(ring, 4, MixedClass::from_coeffs(c), true).expect("valid 4-fold")
}

/// Formal 4-fold with c_1 = a != 0 and c_2 = a^2/2, so ch_2 = 0; ring
/// Q[a]/(a^5), top degree 8.
pub fn formal_fourfold_with_c1() -> ManifoldSpec {
    let ring = power_ring("a", 4, 1).expect("ring is valid");
    let mut c = BTreeMap::new();
    c.insert(0, rat(1));
    c.insert(1, rat(1));
    c.insert(2, ratio(1, 2));
    ManifoldSpec::new(ring, 4, MixedClass::from_coeffs(c), true).expect("valid 4-fold")
}

/// Formal 6-fold with ch_2 = 0, ch_4 = u, ch_6 = v: basis 1, u (deg 8),
/// v (deg 12), u^2 = uv = 0, integral of v = 1.
pub fn formal_sixfold() -> ManifoldSpec {
    let names = vec!["1".into(), "u".into(), "v".into()];
    let degrees = vec![0, 8, 12];
    let mut table = vec![vec![Vec::new(); 3]; 3];
    for j in 0..3 {
        table[0][j] = vec![(j, rat(1))];
        if j != 0 {
            table[j][0] = vec![(j, rat(1))];
        }
    }
    let ring = RingSpec::new(names, degrees, table, 12, vec![(2, rat(1))]).expect("ring valid");
    let mut c = BTreeMap::new();
    c.insert(0, rat(1));
    c.insert(1, rat(-6)); // c_4 = -6u  => ch_4 = u
    c.insert(2, rat(-120)); // c_6 = -120v => ch_6 = v
    ManifoldSpec::new(ring, 6, MixedClass::from_coeffs(c), true).expect("valid 6-fold")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chern_character_p1() {
        let p1 = projective_space(1);
        let ch = chern_character(&p1, 2);
        assert_eq!(ch[0], MixedClass::term(0, rat(1)));
        assert_eq!(ch[1], MixedClass::term(1, rat(2)));
        assert!(ch[2].is_zero(), "degree 4 truncates in P^1");
    }

    #[test]
    fn chern_character_trivial_bundle() {
        let t = trivial_bundle_spec(3);
        let ch = chern_character(&t, 3);
        assert_eq!(ch[0], MixedClass::term(0, rat(3)));
        for c in &ch[1..] {
            assert!(c.is_zero());
        }
    }

    #[test]
    fn chern_character_p2() {
        let p2 = projective_space(2);
        let ch = chern_character(&p2, 2);
        assert_eq!(ch[1], MixedClass::term(1, rat(3)));
        assert_eq!(ch[2], MixedClass::term(2, ratio(3, 2)));
    }

    #[test]
    fn todd_classes() {
        let p1 = projective_space(1);
        let td = todd_class(&p1);
        assert_eq!(td, MixedClass::term(0, rat(1)).add(&MixedClass::term(1, rat(1))));
        assert_eq!(todd_genus(&p1), rat(1));

        let t = trivial_bundle_spec(2);
        assert_eq!(todd_class(&t), MixedClass::term(0, rat(1)));

        let p2 = projective_space(2);
        let td = todd_class(&p2);
        assert_eq!(td.coeff(0), Some(&rat(1)));
        assert_eq!(td.coeff(1), Some(&ratio(3, 2)));
        assert_eq!(td.coeff(2), Some(&rat(1)));
        assert_eq!(todd_genus(&p2), rat(1));
    }

    #[test]
    fn grr_sanity_through_p4() {
        for n in 1..=4 {
            assert_eq!(todd_genus(&projective_space(n)), rat(1), "P^{n}");
        }
    }

    #[test]
    fn a_hat_p1_and_identity() {
        let p1 = projective_space(1);
        let ahat = a_hat_class(&p1);
        assert_eq!(ahat, MixedClass::term(0, rat(1)));
        assert_eq!(a_hat_genus(&p1), rat(0));

        for spec in [
            projective_space(1),
            projective_space(2),
            projective_space(3),
            trivial_bundle_spec(2),
            formal_fourfold(),
            formal_fourfold_with_c1(),
            formal_sixfold(),
        ] {
            let lhs = a_hat_class(&spec);
            let e = spec
                .chern_class(1)
                .scale_rat(&ratio(-1, 2))
                .exp(&spec.ring, Rational::one())
                .unwrap();
            let rhs = e.mul(&todd_class(&spec), &spec.ring);
            assert_eq!(lhs, rhs, "A-hat != e^(-c1/2) Td");
        }
    }

    #[test]
    fn witten_class_examples() {
        // no ch_{2k}, k >= 2 survives degree <= 2: Wit(P^1) = 1
        let p1 = projective_space(1);
        let w = witten_class(&p1, 3).unwrap();
        assert_eq!(w, MixedClass::term(0, QSeries::one(3)));
        assert!(witten_genus(&p1, 3).unwrap().is_zero());

        // formal 4-fold: Wit = 1 + e_4(q) u, genus = e_4(q)
        let f = formal_fourfold();
        let w = witten_class(&f, 2).unwrap();
        let e4 = eisenstein_q(2, 2).unwrap();
        assert_eq!(w.coeff(1), Some(&e4));
        assert_eq!(witten_genus(&f, 2).unwrap(), e4);
        assert_eq!(e4.coeff(0), ratio(1, 120));
    }

    #[test]
    fn witten_limit_check_passes_and_rejects() {
        for spec in [
            trivial_bundle_spec(2),
            projective_space(1),
            formal_fourfold(),
            formal_fourfold_with_c1(),
            formal_sixfold(),
        ] {
            assert!(witten_limit_check(&spec).unwrap());
        }
        // product P^1 x P^1 also has ch_2 = 0
        let p1 = projective_space(1);
        let p1p1 = product_spec(&p1, &p1).unwrap();
        assert!(witten_limit_check(&p1p1).unwrap());

        let p2 = projective_space(2);
        match witten_limit_check(&p2) {
            Err(Error::Ch2NotTrivial { ch2 }) => {
                assert_eq!(ch2, "(3/2)*h^2");
            }
            other => panic!("expected ch_2 rejection, got {other:?}"),
        }
    }

    #[test]
    fn q0_of_witten_is_bernoulli_exponential() {
        for spec in [formal_fourfold(), formal_sixfold(), projective_space(3)] {
            let q0 = witten_class(&spec, 0).unwrap().q_constant_term();
            let log = log_ahat_class(&spec)
                .sub(&chern_character(&spec, 2)[2].scale_rat(&(-bernoulli(2) / rat(2))));
            assert_eq!(q0, log.exp(&spec.ring, Rational::one()).unwrap());
        }
    }

    #[test]
    fn integrate_examples() {
        let p1 = projective_space(1);
        assert_eq!(integrate(&todd_class(&p1), &p1), Some(rat(1)));
        assert_eq!(integrate(&MixedClass::term(0, rat(1)), &p1), None);
        let p3 = projective_space(3);
        assert_eq!(integrate(&todd_class(&p3), &p3), Some(rat(1)));
    }

    #[test]
    fn multiplicativity_on_p1_x_p1() {
        let p1 = projective_space(1);
        let prod = product_spec(&p1, &p1).unwrap();
        let td = todd_class(&prod);
        let td_tensor = tensor_class(&p1.ring, &p1.ring, &todd_class(&p1), &todd_class(&p1));
        assert_eq!(td, td_tensor);

        let ahat = a_hat_class(&prod);
        let ahat_tensor =
            tensor_class(&p1.ring, &p1.ring, &a_hat_class(&p1), &a_hat_class(&p1));
        assert_eq!(ahat, ahat_tensor);

        let w = witten_class(&prod, 2).unwrap();
        let w_tensor = tensor_class(
            &p1.ring,
            &p1.ring,
            &witten_class(&p1, 2).unwrap(),
            &witten_class(&p1, 2).unwrap(),
        );
        assert_eq!(w, w_tensor);
        assert_eq!(todd_genus(&prod), rat(1));
    }

    #[test]
    fn whitney_additivity_of_chern_character() {
        // on the P^3 ring: E with c = (1+h)^2 rank 2, F with c = (1+h)^3
        // rank 3; ch(E + F) = ch(E) + ch(F)
        let ring = power_ring("h", 3, 1).unwrap();
        let mk = |rank: usize, power: u64| {
            let mut c = BTreeMap::new();
            for i in 0..=3usize.min(power as usize) {
                c.insert(i, Rational::from_integer(binomial(power, i as u64)));
            }
            ManifoldSpec::new(ring.clone(), rank, MixedClass::from_coeffs(c), false).unwrap()
        };
        let e = mk(2, 2);
        let f = mk(3, 3);
        let sum = mk(5, 5);
        let che = chern_character(&e, 3);
        let chf = chern_character(&f, 3);
        let chs = chern_character(&sum, 3);
        for m in 0..=3 {
            assert_eq!(chs[m], che[m].add(&chf[m]), "ch_{m} not additive");
        }
    }

    #[test]
    fn ring_validation_rejects_bad_tables() {
        // h * h = 1 violates degree bookkeeping
        let r = RingSpec::new(
            vec!["1".into(), "h".into()],
            vec![0, 2],
            vec![
                vec![vec![(0, rat(1))], vec![(1, rat(1))]],
                vec![vec![(1, rat(1))], vec![(0, rat(1))]],
            ],
            2,
            vec![(1, rat(1))],
        );
        assert!(r.is_err());
    }
}
