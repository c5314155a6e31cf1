//! Checkers for P0 / BD / filtered-BD algebra structures, the
//! odd-cotangent model, bracket-twisted differentials and conjugation.
//!
//! The bracket has cohomological degree +1 and is defined from the odd
//! order-2 operator L by {a,b} = L(ab) - (La)b - (-1)^{|a|} a(Lb). The sign
//! conventions verified by `check_*` (all derivable from that formula) are:
//!
//! - symmetry:              {b,a} = (-1)^{|a||b|} {a,b}
//! - Leibniz (second slot): {a,bc} = {a,b}c + (-1)^{(|a|+1)|b|} b{a,c}
//! - Jacobi:                {a,{b,c}} = {{a,b},c} + (-1)^{|a||b|} {b,{a,c}}
//! - L as derivation:       L{a,b} = -{La,b} - (-1)^{|a|} {a,Lb}
//!
//! Identities are asserted on the window of basis tuples whose total
//! polynomial degree stays within the truncation cap, where every
//! intermediate product is exact.

pub mod model;

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::qseries::QSeries;
use crate::rational::{format_rational, rat, Rational};
use crate::scalar::Coeff;

pub use model::{lift_elt, Mono, OddCotangentModel, SElt};
use model::IElt;

// ---- report ---------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct BdViolation {
    pub identity: String,
    pub witness: Vec<String>,
    pub detail: String,
}

#[derive(Clone, Debug, Default)]
pub struct BdReport {
    pub violations: Vec<BdViolation>,
    pub pairs_checked: usize,
    pub triples_checked: usize,
}

impl BdReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, identity: &str, witness: Vec<String>, detail: String) {
        // cap detail growth; a handful of witnesses per identity is enough
        if self.violations.iter().filter(|v| v.identity == identity).count() < 8 {
            self.violations.push(BdViolation {
                identity: identity.to_string(),
                witness,
                detail,
            });
        }
    }

    fn finish(mut self) -> Self {
        self.violations.sort();
        self.violations.dedup();
        self
    }
}

// ---- model checker (integer fast path) -------------------------------------

/// Checks the full BD axiom list on the odd-cotangent model, with D = hL.
/// `flip_bracket` negates the bracket of one ordered basis pair, for
/// mutation testing.
pub fn check_model(model: &OddCotangentModel, flip_bracket: Option<(u32, u32)>) -> BdReport {
    let mut rep = BdReport::default();
    let n = model.len() as u32;
    let bound = model.bound;
    let bracket = |a: u32, b: u32| -> IElt {
        let mut e = model.bracket_mono(a, b);
        if flip_bracket == Some((a, b)) {
            if let Some(t) = e.first_mut() {
                t.1 = -t.1;
            }
        }
        e
    };
    let elt_name = |e: &IElt| -> String {
        e.iter()
            .map(|(i, c)| format!("{}*{}", c, model.name(*i)))
            .collect::<Vec<_>>()
            .join(" + ")
    };

    // D1 = 0 and D^2 = 0 (exact: L lowers polynomial degree)
    if !model.lpi_mono(model.unit_id()).is_empty() {
        rep.push("differential_unit", vec!["1".into()], "L(1) != 0".into());
    }
    for id in 0..n {
        let l2 = model.lpi_elt(&model.lpi_mono(id));
        if !l2.is_empty() {
            rep.push(
                "differential_squares",
                vec![model.name(id)],
                format!("L^2 = {}", elt_name(&l2)),
            );
        }
        // weight: every term of L(e) has weight w(e) - 1 (h restores it)
        for (t, _) in model.lpi_mono(id) {
            if model.weight(t) != model.weight(id) - 1 {
                rep.push(
                    "differential_weight",
                    vec![model.name(id)],
                    format!("L term {} has weight {}", model.name(t), model.weight(t)),
                );
            }
            if model.degree(t) != model.degree(id) + 1 {
                rep.push(
                    "differential_degree",
                    vec![model.name(id)],
                    format!("L term {} has degree {}", model.name(t), model.degree(t)),
                );
            }
        }
    }

    // pair identities on the window
    for a in 0..n {
        let da = model.poly_degree(a);
        for b in 0..n {
            if da + model.poly_degree(b) > bound {
                continue;
            }
            rep.pairs_checked += 1;
            let ab = model.mul_elt(&vec![(a, 1)], &vec![(b, 1)]);
            let ba = model.mul_elt(&vec![(b, 1)], &vec![(a, 1)]);
            // graded commutativity
            let k = model.koszul(a, b);
            if ab != scale(&ba, k) {
                rep.push(
                    "graded_commutativity",
                    vec![model.name(a), model.name(b)],
                    format!("ab = {}, ba = {}", elt_name(&ab), elt_name(&ba)),
                );
            }
            // product weight additivity / degree additivity
            for (t, _) in &ab {
                if model.weight(*t) != model.weight(a) + model.weight(b) {
                    rep.push(
                        "product_weight",
                        vec![model.name(a), model.name(b)],
                        format!("term {}", model.name(*t)),
                    );
                }
            }
            // BD Leibniz (h-free form): L(ab) = (La)b + (-1)^{|a|} a(Lb) + {a,b}
            let lhs = model.lpi_elt(&ab);
            let mut rhs = model.mul_elt(&model.lpi_mono(a), &vec![(b, 1)]);
            let sa = sign_pow(model.degree(a));
            rhs = add(&rhs, &scale(&model.mul_elt(&vec![(a, 1)], &model.lpi_mono(b)), sa));
            rhs = add(&rhs, &bracket(a, b));
            if lhs != rhs {
                rep.push(
                    "bd_leibniz",
                    vec![model.name(a), model.name(b)],
                    format!("D(ab) = {}, rhs = {}", elt_name(&lhs), elt_name(&rhs)),
                );
            }
            // bracket degree +1 and weight -1
            let br = bracket(a, b);
            for (t, _) in &br {
                if model.degree(*t) != model.degree(a) + model.degree(b) + 1 {
                    rep.push(
                        "bracket_degree",
                        vec![model.name(a), model.name(b)],
                        format!("term {}", model.name(*t)),
                    );
                }
                if model.weight(*t) != model.weight(a) + model.weight(b) - 1 {
                    rep.push(
                        "bracket_weight",
                        vec![model.name(a), model.name(b)],
                        format!("term {}", model.name(*t)),
                    );
                }
            }
            // bracket symmetry {b,a} = (-1)^{|a||b|}{a,b}
            let br_op = bracket(b, a);
            if br_op != scale(&br, model.koszul(a, b)) {
                rep.push(
                    "bracket_symmetry",
                    vec![model.name(a), model.name(b)],
                    format!("{{a,b}} = {}, {{b,a}} = {}", elt_name(&br), elt_name(&br_op)),
                );
            }
            // L a derivation of the bracket:
            // L{a,b} + {La,b} + (-1)^{|a|}{a,Lb} = 0
            let mut acc = model.lpi_elt(&br);
            for (i, c) in model.lpi_mono(a) {
                acc = add(&acc, &scale(&bracket(i, b), c));
            }
            for (j, c) in model.lpi_mono(b) {
                acc = add(&acc, &scale(&bracket(a, j), sa * c));
            }
            if !acc.is_empty() {
                rep.push(
                    "differential_derivation_of_bracket",
                    vec![model.name(a), model.name(b)],
                    format!("defect {}", elt_name(&acc)),
                );
            }
        }
    }

    // triple identities on the window
    for a in 0..n {
        let pa = model.poly_degree(a);
        if pa > bound {
            continue;
        }
        for b in 0..n {
            let pb = pa + model.poly_degree(b);
            if pb > bound {
                continue;
            }
            for c in 0..n {
                if pb + model.poly_degree(c) > bound {
                    continue;
                }
                rep.triples_checked += 1;
                // associativity
                let ab = model.mul_elt(&vec![(a, 1)], &vec![(b, 1)]);
                let bc = model.mul_elt(&vec![(b, 1)], &vec![(c, 1)]);
                let lhs = model.mul_elt(&ab, &vec![(c, 1)]);
                let rhs = model.mul_elt(&vec![(a, 1)], &bc);
                if lhs != rhs {
                    rep.push(
                        "associativity",
                        vec![model.name(a), model.name(b), model.name(c)],
                        String::new(),
                    );
                }
                // bracket Leibniz: {a,bc} = {a,b}c + (-1)^{(|a|+1)|b|} b{a,c}
                let lhs = bracket_elt_left(model, &bracket, a, &bc);
                let mut rhs = model.mul_elt(&bracket(a, b), &vec![(c, 1)]);
                let s = sign_pow((model.degree(a) + 1) * model.degree(b));
                rhs = add(&rhs, &scale(&model.mul_elt(&vec![(b, 1)], &bracket(a, c)), s));
                if lhs != rhs {
                    rep.push(
                        "bracket_leibniz",
                        vec![model.name(a), model.name(b), model.name(c)],
                        format!("lhs = {}, rhs = {}", elt_name(&lhs), elt_name(&rhs)),
                    );
                }
                // Jacobi: {a,{b,c}} = {{a,b},c} + (-1)^{|a||b|} {b,{a,c}}
                let lhs = bracket_elt_left(model, &bracket, a, &bracket(b, c));
                let mut rhs = bracket_elt_right(model, &bracket, &bracket(a, b), c);
                let s = sign_pow(model.degree(a) * model.degree(b));
                rhs = add(
                    &rhs,
                    &scale(&bracket_elt_left(model, &bracket, b, &bracket(a, c)), s),
                );
                if lhs != rhs {
                    rep.push(
                        "bracket_jacobi",
                        vec![model.name(a), model.name(b), model.name(c)],
                        format!("lhs = {}, rhs = {}", elt_name(&lhs), elt_name(&rhs)),
                    );
                }
            }
        }
    }
    rep.finish()
}

fn sign_pow(e: i64) -> i64 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

fn add(a: &IElt, b: &IElt) -> IElt {
    let mut v = a.clone();
    v.extend(b.iter().cloned());
    let mut out = v;
    out.sort_by_key(|t| t.0);
    let mut merged: IElt = Vec::with_capacity(out.len());
    for (i, c) in out {
        match merged.last_mut() {
            Some((li, lc)) if *li == i => {
                *lc += c;
                if *lc == 0 {
                    merged.pop();
                }
            }
            _ => merged.push((i, c)),
        }
    }
    merged
}

fn scale(a: &IElt, k: i64) -> IElt {
    if k == 0 {
        return Vec::new();
    }
    a.iter().map(|(i, c)| (*i, c * k)).collect()
}

fn bracket_elt_left(
    _model: &OddCotangentModel,
    bracket: &impl Fn(u32, u32) -> IElt,
    a: u32,
    e: &IElt,
) -> IElt {
    let mut out = Vec::new();
    for (j, c) in e {
        out = add(&out, &scale(&bracket(a, *j), *c));
    }
    out
}

fn bracket_elt_right(
    _model: &OddCotangentModel,
    bracket: &impl Fn(u32, u32) -> IElt,
    e: &IElt,
    c_id: u32,
) -> IElt {
    let mut out = Vec::new();
    for (i, c) in e {
        out = add(&out, &scale(&bracket(*i, c_id), *c));
    }
    out
}

/// hbar specializations of the model: at 0 the differential vanishes and
/// the P0 axioms are exactly the product/bracket part of `check_model`; at
/// 1 the BD identity holds with D = L. Violations are reported the same
/// way.
pub fn check_model_specialized(model: &OddCotangentModel, hbar: u8) -> BdReport {
    let mut rep = BdReport::default();
    let bound = model.bound;
    let n = model.len() as u32;
    for a in 0..n {
        for b in 0..n {
            if model.poly_degree(a) + model.poly_degree(b) > bound {
                continue;
            }
            rep.pairs_checked += 1;
            let ab = model.mul_elt(&vec![(a, 1)], &vec![(b, 1)]);
            let d_ab = if hbar == 0 { Vec::new() } else { model.lpi_elt(&ab) };
            let mut rhs = if hbar == 0 {
                Vec::new()
            } else {
                let mut r = model.mul_elt(&model.lpi_mono(a), &vec![(b, 1)]);
                r = add(
                    &r,
                    &scale(
                        &model.mul_elt(&vec![(a, 1)], &model.lpi_mono(b)),
                        sign_pow(model.degree(a)),
                    ),
                );
                r
            };
            if hbar == 1 {
                rhs = add(&rhs, &model.bracket_mono(a, b));
            }
            if d_ab != rhs {
                rep.push(
                    if hbar == 0 { "p0_derivation" } else { "bd_identity_h1" },
                    vec![model.name(a), model.name(b)],
                    String::new(),
                );
            }
        }
    }
    rep.finish()
}

// ---- twisted differentials and conjugation ---------------------------------

/// A base-pulled-back twist datum: terms use only x-variables and dx
/// generators. `require_positive_form_degree` demands every component be a
/// form of even positive degree (the shape of log Td / log Wit);
/// conjugation also accepts degree-0 base functions with no constant term.
pub fn validate_twist_alpha<S: Coeff>(
    model: &OddCotangentModel,
    alpha: &SElt<S>,
    require_positive_form_degree: bool,
) -> Result<()> {
    for (id, _) in alpha {
        let m = model.mono(*id);
        let form_deg = m.form.count_ones();
        let xi_part: u32 = m.poly[model.n..].iter().map(|&e| e as u32).sum();
        let dxi_part = (m.form >> model.n).count_ones();
        if xi_part != 0 || dxi_part != 0 {
            return Err(Error::Domain(format!(
                "twist datum is not pulled back from the base: {}",
                model.name(*id)
            )));
        }
        if form_deg % 2 != 0 {
            return Err(Error::Domain(format!(
                "twist datum must have even form degree: {} (odd components break D^2 = 0)",
                model.name(*id)
            )));
        }
        if require_positive_form_degree && form_deg == 0 {
            return Err(Error::Domain(format!(
                "twist datum must have positive form degree: {}",
                model.name(*id)
            )));
        }
        if form_deg == 0 && model.poly_degree(*id) == 0 {
            return Err(Error::Domain("twist datum must be nilpotent (no constant term)".into()));
        }
    }
    Ok(())
}

/// The twisted differential D' = h(L + {alpha, -}). Junk from the
/// polynomial truncation can only sit in degree >= bound - (number of L or
/// bracket applications); comparisons restrict accordingly.
pub struct TwistedDifferential<'m, S: Coeff> {
    pub model: &'m OddCotangentModel,
    pub alpha: SElt<S>,
}

impl<'m, S: Coeff> TwistedDifferential<'m, S> {
    /// Apply the h-free part L + {alpha, -}.
    pub fn apply(&self, e: &SElt<S>) -> SElt<S> {
        let l = self.model.slpi_elt(e);
        let br = self.model.sbracket_elt(&self.alpha, e);
        self.model.sadd(&l, &br)
    }
}

pub fn twist_differential<'m, S: Coeff>(
    model: &'m OddCotangentModel,
    alpha: SElt<S>,
) -> Result<TwistedDifferential<'m, S>> {
    validate_twist_alpha(model, &alpha, true)?;
    Ok(TwistedDifferential { model, alpha })
}

/// Verify (D')^2 = 0 on every basis element, comparing away the junk window
/// (two operator applications cost two degrees). Returns the basis elements
/// where the windowed square fails.
pub fn twisted_square_defects<S: Coeff>(
    model: &OddCotangentModel,
    tw: &TwistedDifferential<S>,
) -> Vec<String> {
    let cap = model.bound.saturating_sub(2);
    let mut bad = Vec::new();
    for id in 0..model.len() as u32 {
        let once = tw.apply(&vec![(id, tw.alpha.first().map(|(_, c)| c.lift(&rat(1))).unwrap_or_else(|| panic!("twist datum must be nonempty")))]);
        let twice = tw.apply(&once);
        if !model.restrict_polydeg(&twice, cap).is_empty() {
            bad.push(model.name(id));
        }
    }
    bad
}

/// Conjugation by T = exp(alpha): the map a -> T a intertwines L and the
/// twisted differential: T^{-1} L(T a) = L a + {alpha, a} on the window.
pub struct Conjugation<'m, S: Coeff> {
    pub model: &'m OddCotangentModel,
    pub alpha: SElt<S>,
    pub t: SElt<S>,
    pub t_inv: SElt<S>,
}

pub fn conjugate<'m, S: Coeff>(
    model: &'m OddCotangentModel,
    alpha: SElt<S>,
    one: S,
) -> Result<Conjugation<'m, S>> {
    validate_twist_alpha(model, &alpha, false)?;
    let t = exp_elt(model, &alpha, &one)?;
    let t_inv = exp_elt(model, &model.sneg(&alpha), &one)?;
    Ok(Conjugation { model, alpha, t, t_inv })
}

fn exp_elt<S: Coeff>(model: &OddCotangentModel, e: &SElt<S>, one: &S) -> Result<SElt<S>> {
    let mut acc: SElt<S> = vec![(model.unit_id(), one.clone())];
    let mut pow: SElt<S> = acc.clone();
    let mut j: u64 = 1;
    loop {
        pow = model.smul_elt(&pow, e);
        if pow.is_empty() {
            return Ok(acc);
        }
        let scaled: SElt<S> = pow
            .iter()
            .map(|(i, c)| (*i, c.scale(&Rational::new(1.into(), crate::rational::factorial(j)))))
            .collect();
        acc = model.sadd(&acc, &scaled);
        j += 1;
        if j > 4 * (model.bound as u64 + model.n as u64 + 2) {
            return Err(Error::Domain("exp did not terminate; datum is not nilpotent".into()));
        }
    }
}

impl<'m, S: Coeff> Conjugation<'m, S> {
    /// T^{-1} (L (T a)).
    pub fn conjugated_diff(&self, a: &SElt<S>) -> SElt<S> {
        let ta = self.model.smul_elt(&self.t, a);
        let lta = self.model.slpi_elt(&ta);
        self.model.smul_elt(&self.t_inv, &lta)
    }

    /// The multiplication-by-T chain map.
    pub fn chain_map(&self, a: &SElt<S>) -> SElt<S> {
        self.model.smul_elt(&self.t, a)
    }

    /// Basis elements where T^{-1} L (T a) != L a + {alpha, a} within the
    /// junk window (one L application costs one degree).
    pub fn identity_defects(&self) -> Vec<String> {
        let model = self.model;
        let cap = model.bound.saturating_sub(1);
        let mut bad = Vec::new();
        for id in 0..model.len() as u32 {
            let one = match self.t.first() {
                Some((_, c)) => c.lift(&rat(1)),
                None => return vec!["empty T".into()],
            };
            let e: SElt<S> = vec![(id, one)];
            let lhs = self.conjugated_diff(&e);
            let rhs = model.sadd(&model.slpi_elt(&e), &model.sbracket_elt(&self.alpha, &e));
            let diff = model.sadd(&lhs, &model.sneg(&rhs));
            if !model.restrict_polydeg(&diff, cap).is_empty() {
                bad.push(model.name(id));
            }
        }
        bad
    }
}

// ---- generic presentations --------------------------------------------------

/// Polynomial in hbar truncated above degree 3; all checked identities are
/// at most linear in hbar, so the cap never bites.
#[derive(Clone, Debug, PartialEq)]
pub struct HPoly(pub [Rational; 4]);

impl HPoly {
    pub fn zero() -> Self {
        HPoly([Rational::zero(), Rational::zero(), Rational::zero(), Rational::zero()])
    }

    pub fn constant(r: Rational) -> Self {
        let mut p = Self::zero();
        p.0[0] = r;
        p
    }

    pub fn hbar(power: usize, r: Rational) -> Self {
        let mut p = Self::zero();
        if power < 4 {
            p.0[power] = r;
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut p = Self::zero();
        for i in 0..4 {
            p.0[i] = &self.0[i] + &o.0[i];
        }
        p
    }

    pub fn neg(&self) -> Self {
        let mut p = Self::zero();
        for i in 0..4 {
            p.0[i] = -&self.0[i];
        }
        p
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut p = Self::zero();
        for i in 0..4 {
            if self.0[i].is_zero() {
                continue;
            }
            for j in 0..4 - i {
                p.0[i + j] = &p.0[i + j] + &self.0[i] * &o.0[j];
            }
        }
        p
    }

    /// Multiply by hbar (shift up, truncate).
    pub fn shift(&self) -> Self {
        let mut p = Self::zero();
        for i in 0..3 {
            p.0[i + 1] = self.0[i].clone();
        }
        p
    }

    pub fn eval(&self, h: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.0.iter().rev() {
            acc = acc * h + c;
        }
        acc
    }

    pub fn display(&self) -> String {
        let mut parts = Vec::new();
        for (i, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            parts.push(match i {
                0 => format_rational(c),
                1 => format!("{}*h", format_rational(c)),
                _ => format!("{}*h^{}", format_rational(c), i),
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

pub type HVec = Vec<(usize, HPoly)>;

/// A finite BD presentation: graded basis with optional C^x-weights,
/// product and bracket structure constants over Q[h]/(h^4), and a
/// differential matrix. Basis `unit` must be the unit of the product.
#[derive(Clone, Debug)]
pub struct BdPresentation {
    pub names: Vec<String>,
    pub degrees: Vec<i64>,
    pub weights: Option<Vec<i64>>,
    pub unit: usize,
    /// product[i][j] = e_i e_j
    pub product: Vec<Vec<HVec>>,
    /// bracket[i][j] = {e_i, e_j}
    pub bracket: Vec<Vec<HVec>>,
    /// differential[i] = D e_i
    pub differential: Vec<HVec>,
}

impl BdPresentation {
    pub fn new(
        names: Vec<String>,
        degrees: Vec<i64>,
        weights: Option<Vec<i64>>,
        unit: usize,
        product: Vec<Vec<HVec>>,
        bracket: Vec<Vec<HVec>>,
        differential: Vec<HVec>,
    ) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::InvalidSpec("presentation needs a basis".into()));
        }
        if degrees.len() != n
            || product.len() != n
            || bracket.len() != n
            || differential.len() != n
            || product.iter().any(|r| r.len() != n)
            || bracket.iter().any(|r| r.len() != n)
            || weights.as_ref().is_some_and(|w| w.len() != n)
            || unit >= n
        {
            return Err(Error::InvalidSpec("presentation tables have inconsistent shape".into()));
        }
        for row in product.iter().chain(bracket.iter()) {
            for cell in row {
                for (k, _) in cell {
                    if *k >= n {
                        return Err(Error::InvalidSpec("structure constant index out of range".into()));
                    }
                }
            }
        }
        for cell in &differential {
            for (k, _) in cell {
                if *k >= n {
                    return Err(Error::InvalidSpec("differential index out of range".into()));
                }
            }
        }
        Ok(BdPresentation { names, degrees, weights, unit, product, bracket, differential })
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    fn canon(&self, v: HVec) -> HVec {
        let mut map: BTreeMap<usize, HPoly> = BTreeMap::new();
        for (i, c) in v {
            let e = map.entry(i).or_insert_with(HPoly::zero);
            *e = e.add(&c);
        }
        map.into_iter().filter(|(_, c)| !c.is_zero()).collect()
    }

    fn mul(&self, a: &HVec, b: &HVec) -> HVec {
        let mut out = Vec::new();
        for (i, x) in a {
            for (j, y) in b {
                let xy = x.mul(y);
                for (k, c) in &self.product[*i][*j] {
                    out.push((*k, xy.mul(c)));
                }
            }
        }
        self.canon(out)
    }

    fn brk(&self, a: &HVec, b: &HVec) -> HVec {
        let mut out = Vec::new();
        for (i, x) in a {
            for (j, y) in b {
                let xy = x.mul(y);
                for (k, c) in &self.bracket[*i][*j] {
                    out.push((*k, xy.mul(c)));
                }
            }
        }
        self.canon(out)
    }

    fn dif(&self, a: &HVec) -> HVec {
        let mut out = Vec::new();
        for (i, x) in a {
            for (k, c) in &self.differential[*i] {
                out.push((*k, x.mul(c)));
            }
        }
        self.canon(out)
    }

    fn basis(&self, i: usize) -> HVec {
        vec![(i, HPoly::constant(Rational::one()))]
    }

    fn display_vec(&self, v: &HVec) -> String {
        if v.is_empty() {
            return "0".into();
        }
        v.iter()
            .map(|(i, c)| format!("({})*{}", c.display(), self.names[*i]))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Substitute a numeric value for hbar, producing a presentation whose
    /// scalars are constants.
    pub fn specialize_hbar(&self, value: &Rational) -> BdPresentation {
        let ev = |v: &HVec| -> HVec {
            v.iter()
                .map(|(i, c)| (*i, HPoly::constant(c.eval(value))))
                .filter(|(_, c)| !c.is_zero())
                .collect()
        };
        BdPresentation {
            names: self.names.clone(),
            degrees: self.degrees.clone(),
            weights: self.weights.clone(),
            unit: self.unit,
            product: self
                .product
                .iter()
                .map(|r| r.iter().map(&ev).collect())
                .collect(),
            bracket: self
                .bracket
                .iter()
                .map(|r| r.iter().map(&ev).collect())
                .collect(),
            differential: self.differential.iter().map(&ev).collect(),
        }
    }
}

/// Which identity family to enforce.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BdMode {
    /// Full BD: D(ab) = (Da)b + (-1)^{|a|} a(Db) + h{a,b}.
    Bd,
    /// P0: D a derivation, bracket present but no h-correction.
    P0,
    /// BD at h = 1: D(ab) = (Da)b + (-1)^{|a|} a(Db) + {a,b}.
    HbarOne,
}

/// Full axiom check for a generic presentation.
pub fn check_presentation(p: &BdPresentation, mode: BdMode) -> BdReport {
    let mut rep = BdReport::default();
    let n = p.dim();
    let name2 = |a: usize, b: usize| vec![p.names[a].clone(), p.names[b].clone()];

    // unit laws
    for j in 0..n {
        let lhs = p.mul(&p.basis(p.unit), &p.basis(j));
        if lhs != p.basis(j) {
            rep.push("unit", vec![p.names[j].clone()], p.display_vec(&lhs));
        }
    }
    // D 1 = 0, D^2 = 0, degree/weight of D
    if !p.dif(&p.basis(p.unit)).is_empty() {
        rep.push("differential_unit", vec![p.names[p.unit].clone()], String::new());
    }
    for i in 0..n {
        let d2 = p.dif(&p.dif(&p.basis(i)));
        if !d2.is_empty() {
            rep.push(
                "differential_squares",
                vec![p.names[i].clone()],
                p.display_vec(&d2),
            );
        }
        for (k, c) in &p.differential[i] {
            if p.degrees[*k] != p.degrees[i] + 1 {
                rep.push("differential_degree", vec![p.names[i].clone()], p.names[*k].clone());
            }
            if let Some(w) = &p.weights {
                // weight of h^m e_k is m + w_k; D has weight 0
                for (m, coef) in c.0.iter().enumerate() {
                    if !coef.is_zero() && m as i64 + w[*k] != w[i] {
                        rep.push(
                            "differential_weight",
                            vec![p.names[i].clone()],
                            format!("h^{} {}", m, p.names[*k]),
                        );
                    }
                }
            }
        }
    }

    for a in 0..n {
        for b in 0..n {
            rep.pairs_checked += 1;
            let ab = p.mul(&p.basis(a), &p.basis(b));
            let ba = p.mul(&p.basis(b), &p.basis(a));
            let k = sign_pow(p.degrees[a] * p.degrees[b]);
            if ab != hscale(&ba, k) {
                rep.push("graded_commutativity", name2(a, b), p.display_vec(&ab));
            }
            for (t, c) in &ab {
                if p.degrees[*t] != p.degrees[a] + p.degrees[b] {
                    rep.push("product_degree", name2(a, b), p.names[*t].clone());
                }
                if let Some(w) = &p.weights {
                    for (m, coef) in c.0.iter().enumerate() {
                        if !coef.is_zero() && m as i64 + w[*t] != w[a] + w[b] {
                            rep.push("product_weight", name2(a, b), p.names[*t].clone());
                        }
                    }
                }
            }
            // BD Leibniz in the requested mode
            let lhs = p.dif(&ab);
            let mut rhs = p.mul(&p.dif(&p.basis(a)), &p.basis(b));
            rhs = hadd(
                &rhs,
                &hscale(&p.mul(&p.basis(a), &p.dif(&p.basis(b))), sign_pow(p.degrees[a])),
                p,
            );
            match mode {
                BdMode::Bd => {
                    let br = p.brk(&p.basis(a), &p.basis(b));
                    let shifted: HVec = br.iter().map(|(i, c)| (*i, c.shift())).collect();
                    rhs = hadd(&rhs, &shifted, p);
                }
                BdMode::P0 => {}
                BdMode::HbarOne => {
                    rhs = hadd(&rhs, &p.brk(&p.basis(a), &p.basis(b)), p);
                }
            }
            if lhs != rhs {
                rep.push(
                    "bd_leibniz",
                    name2(a, b),
                    format!("D(ab) = {}, rhs = {}", p.display_vec(&lhs), p.display_vec(&rhs)),
                );
            }
            // bracket degree +1, weight -1, symmetry
            let br = p.brk(&p.basis(a), &p.basis(b));
            for (t, c) in &br {
                if p.degrees[*t] != p.degrees[a] + p.degrees[b] + 1 {
                    rep.push("bracket_degree", name2(a, b), p.names[*t].clone());
                }
                if let Some(w) = &p.weights {
                    for (m, coef) in c.0.iter().enumerate() {
                        if !coef.is_zero() && m as i64 + w[*t] != w[a] + w[b] - 1 {
                            rep.push("bracket_weight", name2(a, b), p.names[*t].clone());
                        }
                    }
                }
            }
            let br_op = p.brk(&p.basis(b), &p.basis(a));
            if br_op != hscale(&br, sign_pow(p.degrees[a] * p.degrees[b])) {
                rep.push("bracket_symmetry", name2(a, b), p.display_vec(&br));
            }
            // D as derivation of the bracket:
            // D{a,b} + {Da,b} + (-1)^{|a|}{a,Db} = 0
            let mut acc = p.dif(&br);
            acc = hadd(&acc, &p.brk(&p.dif(&p.basis(a)), &p.basis(b)), p);
            acc = hadd(
                &acc,
                &hscale(&p.brk(&p.basis(a), &p.dif(&p.basis(b))), sign_pow(p.degrees[a])),
                p,
            );
            if !acc.is_empty() {
                rep.push(
                    "differential_derivation_of_bracket",
                    name2(a, b),
                    p.display_vec(&acc),
                );
            }
        }
    }

    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                rep.triples_checked += 1;
                let w3 = vec![p.names[a].clone(), p.names[b].clone(), p.names[c].clone()];
                let lhs = p.mul(&p.mul(&p.basis(a), &p.basis(b)), &p.basis(c));
                let rhs = p.mul(&p.basis(a), &p.mul(&p.basis(b), &p.basis(c)));
                if lhs != rhs {
                    rep.push("associativity", w3.clone(), String::new());
                }
                let bc = p.mul(&p.basis(b), &p.basis(c));
                let lhs = p.brk(&p.basis(a), &bc);
                let mut rhs = p.mul(&p.brk(&p.basis(a), &p.basis(b)), &p.basis(c));
                rhs = hadd(
                    &rhs,
                    &hscale(
                        &p.mul(&p.basis(b), &p.brk(&p.basis(a), &p.basis(c))),
                        sign_pow((p.degrees[a] + 1) * p.degrees[b]),
                    ),
                    p,
                );
                if lhs != rhs {
                    rep.push("bracket_leibniz", w3.clone(), String::new());
                }
                let lhs = p.brk(&p.basis(a), &p.brk(&p.basis(b), &p.basis(c)));
                let mut rhs = p.brk(&p.brk(&p.basis(a), &p.basis(b)), &p.basis(c));
                rhs = hadd(
                    &rhs,
                    &hscale(
                        &p.brk(&p.basis(b), &p.brk(&p.basis(a), &p.basis(c))),
                        sign_pow(p.degrees[a] * p.degrees[b]),
                    ),
                    p,
                );
                if lhs != rhs {
                    rep.push("bracket_jacobi", w3, String::new());
                }
            }
        }
    }
    rep.finish()
}

fn hadd(a: &HVec, b: &HVec, p: &BdPresentation) -> HVec {
    let mut v = a.clone();
    v.extend(b.iter().cloned());
    p.canon(v)
}

fn hscale(a: &HVec, k: i64) -> HVec {
    if k == 1 {
        return a.clone();
    }
    a.iter()
        .map(|(i, c)| (*i, if k == -1 { c.neg() } else { c.mul(&HPoly::constant(rat(k))) }))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn model_passes_bd_axioms_n1() {
        let m = OddCotangentModel::new(1, 4).unwrap();
        let rep = check_model(&m, None);
        assert!(rep.passed(), "violations: {:#?}", rep.violations);
        assert!(rep.pairs_checked > 0 && rep.triples_checked > 0);
    }

    #[test]
    fn mutation_is_detected() {
        let m = OddCotangentModel::new(1, 3).unwrap();
        // flip the bracket of a pair with nonzero bracket: {dx, xi} = 1
        let dx = m.id(&Mono { poly: vec![0, 0], form: 0b01 });
        let xi = m.id(&Mono { poly: vec![0, 1], form: 0 });
        let rep = check_model(&m, Some((dx, xi)));
        assert!(!rep.passed());
        // the witness names the mutated pair in at least one violation
        assert!(
            rep.violations
                .iter()
                .any(|v| v.witness.contains(&"dx1".to_string()) && v.witness.contains(&"xi1".to_string())),
            "violations: {:#?}",
            rep.violations
        );
    }

    #[test]
    fn specializations() {
        let m = OddCotangentModel::new(1, 3).unwrap();
        assert!(check_model_specialized(&m, 0).passed());
        assert!(check_model_specialized(&m, 1).passed());
    }

    #[test]
    fn twist_validation() {
        let m = OddCotangentModel::new(2, 4).unwrap();
        // odd form degree rejected
        let dx1 = m.id(&Mono { poly: vec![0; 4], form: 0b0001 });
        let odd: SElt<Rational> = vec![(dx1, rat(1))];
        assert!(twist_differential(&m, odd).is_err());
        // fibre variables rejected
        let xi = m.id(&Mono { poly: vec![0, 0, 1, 0], form: 0 });
        let fib: SElt<Rational> = vec![(xi, rat(1))];
        assert!(twist_differential(&m, fib).is_err());
        // base 2-form accepted
        let w = m.id(&Mono { poly: vec![1, 0, 0, 0], form: 0b0011 });
        let ok: SElt<Rational> = vec![(w, rat(1))];
        assert!(twist_differential(&m, ok).is_ok());
    }

    #[test]
    fn zero_twist_is_plain_differential() {
        let m = OddCotangentModel::new(1, 3).unwrap();
        let tw = TwistedDifferential { model: &m, alpha: Vec::<(u32, Rational)>::new() };
        for id in 0..m.len() as u32 {
            let e: SElt<Rational> = vec![(id, rat(1))];
            assert_eq!(tw.apply(&e), m.slpi_elt(&e));
        }
    }

    #[test]
    fn twisted_differential_squares_to_zero() {
        let m = OddCotangentModel::new(2, 4).unwrap();
        // alpha = log(1 + u) = u - u^2/2 for u = x1 dx1 dx2 (u^2 = 0)
        let u = m.id(&Mono { poly: vec![1, 0, 0, 0], form: 0b0011 });
        let alpha: SElt<Rational> = vec![(u, rat(1))];
        let tw = twist_differential(&m, alpha).unwrap();
        let bad = twisted_square_defects(&m, &tw);
        assert!(bad.is_empty(), "D'^2 != 0 on {bad:?}");
    }

    #[test]
    fn conjugation_identity_exhaustive() {
        let m = OddCotangentModel::new(2, 3).unwrap();
        let u = m.id(&Mono { poly: vec![0; 4], form: 0b0011 });
        let x1dx1dx2 = m.id(&Mono { poly: vec![1, 0, 0, 0], form: 0b0011 });
        let alpha: SElt<Rational> = vec![(u, ratio(1, 2)), (x1dx1dx2, rat(-3))];
        let conj = conjugate(&m, alpha, Rational::one()).unwrap();
        let bad = conj.identity_defects();
        assert!(bad.is_empty(), "conjugation identity fails on {bad:?}");
    }

    #[test]
    fn conjugation_with_base_function_n1() {
        let m = OddCotangentModel::new(1, 4).unwrap();
        // alpha = f(x) with no constant term
        let x = m.id(&Mono { poly: vec![1, 0], form: 0 });
        let x2 = m.id(&Mono { poly: vec![2, 0], form: 0 });
        let alpha: SElt<Rational> = vec![(x, rat(2)), (x2, ratio(-1, 3))];
        let conj = conjugate(&m, alpha, Rational::one()).unwrap();
        let bad = conj.identity_defects();
        assert!(bad.is_empty(), "conjugation identity fails on {bad:?}");
        // T = 1 is the identity conjugation
        let conj = conjugate(&m, Vec::<(u32, Rational)>::new(), Rational::one()).unwrap();
        for id in 0..m.len() as u32 {
            let e: SElt<Rational> = vec![(id, rat(1))];
            assert_eq!(conj.chain_map(&e), e);
        }
    }

    #[test]
    fn presentation_checker_trivial_p0() {
        // commutative algebra, zero bracket, zero differential
        let n = 2;
        let mut product = vec![vec![Vec::new(); n]; n];
        product[0][0] = vec![(0, HPoly::constant(rat(1)))];
        product[0][1] = vec![(1, HPoly::constant(rat(1)))];
        product[1][0] = vec![(1, HPoly::constant(rat(1)))];
        // e1 * e1 = 0 (nilpotent even generator)
        let p = BdPresentation::new(
            vec!["1".into(), "t".into()],
            vec![0, 0],
            Some(vec![0, 0]),
            0,
            product,
            vec![vec![Vec::new(); n]; n],
            vec![Vec::new(); n],
        )
        .unwrap();
        let rep = check_presentation(&p, BdMode::Bd);
        assert!(rep.passed(), "{:#?}", rep.violations);
        assert!(check_presentation(&p.specialize_hbar(&rat(0)), BdMode::P0).passed());
        assert!(check_presentation(&p.specialize_hbar(&rat(1)), BdMode::HbarOne).passed());
    }

    #[test]
    fn presentation_checker_detects_broken_leibniz() {
        // basis 1, a (deg 0, wt 1), b (deg 1, wt 0); D a = h b; products with
        // a^2 = ab = b^2 = 0; zero bracket. This satisfies BD. Then break D.
        let n = 3;
        let mut product = vec![vec![Vec::new(); n]; n];
        for j in 0..n {
            product[0][j] = vec![(j, HPoly::constant(rat(1)))];
            if j != 0 {
                product[j][0] = vec![(j, HPoly::constant(rat(1)))];
            }
        }
        let mut differential = vec![Vec::new(); n];
        differential[1] = vec![(2, HPoly::hbar(1, rat(1)))];
        let p = BdPresentation::new(
            vec!["1".into(), "a".into(), "b".into()],
            vec![0, 0, 1],
            Some(vec![0, 1, 0]),
            0,
            product.clone(),
            vec![vec![Vec::new(); n]; n],
            differential.clone(),
        )
        .unwrap();
        assert!(check_presentation(&p, BdMode::Bd).passed());

        // break: D b = 1 violates degree bookkeeping and D^2 = 0
        let mut broken = differential;
        broken[2] = vec![(0, HPoly::constant(rat(1)))];
        let p = BdPresentation::new(
            vec!["1".into(), "a".into(), "b".into()],
            vec![0, 0, 1],
            None,
            0,
            product,
            vec![vec![Vec::new(); n]; n],
            broken,
        )
        .unwrap();
        let rep = check_presentation(&p, BdMode::Bd);
        assert!(!rep.passed());
    }
}
