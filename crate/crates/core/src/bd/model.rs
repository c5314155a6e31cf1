//! The odd-cotangent model: polynomial forms on T*A^n with reversed
//! grading, the operators d, i_pi and L_pi = [i_pi, d], and the degree-+1
//! bracket {a,b} = L(ab) - (La)b - (-1)^{|a|} a(Lb).
//!
//! Monomials are x^a xi^b dx_S dxi_T with |a| + |b| bounded by the
//! polynomial cap. Truncating products above the cap is the quotient by a
//! genuine ideal, so multiplication is exact; d and L lower the polynomial
//! degree by one and never truncate. Sign conventions: generators are
//! ordered dx_1 < ... < dx_n < dxi_1 < ... < dxi_n, contraction acts from
//! the left, and i_pi = sum_i iota_{dx_i} iota_{dxi_i}, normalized so that
//! <pi, dxi ^ dx> = 1.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::scalar::Coeff;

/// A monomial: polynomial exponents (x_1..x_n then xi_1..xi_n) and a form
/// bitmask (dx_i = bit i, dxi_i = bit n+i).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mono {
    pub poly: Vec<u8>,
    pub form: u32,
}

pub struct OddCotangentModel {
    pub n: usize,
    pub bound: u32,
    monos: Vec<Mono>,
    index: HashMap<Mono, u32>,
}

/// Integer linear combination of monomials, kept sorted by id.
pub type IElt = Vec<(u32, i64)>;

fn canon(mut terms: Vec<(u32, i64)>) -> IElt {
    terms.sort_by_key(|t| t.0);
    let mut out: IElt = Vec::with_capacity(terms.len());
    for (id, c) in terms {
        if c == 0 {
            continue;
        }
        match out.last_mut() {
            Some((lid, lc)) if *lid == id => {
                *lc += c;
                if *lc == 0 {
                    out.pop();
                }
            }
            _ => out.push((id, c)),
        }
    }
    out
}

fn add_scaled(a: &IElt, b: &IElt, k: i64) -> IElt {
    let mut v = a.clone();
    v.extend(b.iter().map(|(i, c)| (*i, c * k)));
    canon(v)
}

impl OddCotangentModel {
    pub fn new(n: usize, bound: u32) -> Result<Self> {
        if n == 0 || n > 8 {
            return Err(Error::Domain("model needs 1 <= n <= 8 base directions".into()));
        }
        if bound < 1 {
            return Err(Error::Domain("polynomial bound must be >= 1".into()));
        }
        let mut monos = Vec::new();
        let mut cur = vec![0u8; 2 * n];
        fn rec(pos: usize, left: u8, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
            if pos == cur.len() {
                out.push(cur.clone());
                return;
            }
            for e in 0..=left {
                cur[pos] = e;
                rec(pos + 1, left - e, cur, out);
            }
            cur[pos] = 0;
        }
        let mut polys = Vec::new();
        rec(0, bound as u8, &mut cur, &mut polys);
        polys.sort_by_key(|p| (p.iter().map(|&e| e as u32).sum::<u32>(), p.clone()));
        for poly in polys {
            for form in 0..(1u32 << (2 * n)) {
                monos.push(Mono { poly: poly.clone(), form });
            }
        }
        let index = monos.iter().cloned().enumerate().map(|(i, m)| (m, i as u32)).collect();
        Ok(OddCotangentModel { n, bound, monos, index })
    }

    pub fn len(&self) -> usize {
        self.monos.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn mono(&self, id: u32) -> &Mono {
        &self.monos[id as usize]
    }

    pub fn id(&self, m: &Mono) -> u32 {
        self.index[m]
    }

    pub fn unit_id(&self) -> u32 {
        self.index[&Mono { poly: vec![0; 2 * self.n], form: 0 }]
    }

    pub fn poly_degree(&self, id: u32) -> u32 {
        self.monos[id as usize].poly.iter().map(|&e| e as u32).sum()
    }

    /// Cohomological degree: i-forms sit in degree -i.
    pub fn degree(&self, id: u32) -> i64 {
        -(self.monos[id as usize].form.count_ones() as i64)
    }

    /// C^x (fibre-scaling) weight: xi and dxi count 1, x and dx count 0.
    pub fn weight(&self, id: u32) -> i64 {
        let m = &self.monos[id as usize];
        let xi: u32 = m.poly[self.n..].iter().map(|&e| e as u32).sum();
        let dxi = (m.form >> self.n).count_ones();
        xi as i64 + dxi as i64
    }

    pub fn name(&self, id: u32) -> String {
        let m = &self.monos[id as usize];
        let mut parts = Vec::new();
        for (v, &e) in m.poly.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let base = if v < self.n {
                format!("x{}", v + 1)
            } else {
                format!("xi{}", v - self.n + 1)
            };
            parts.push(if e == 1 { base } else { format!("{base}^{e}") });
        }
        for g in 0..(2 * self.n) {
            if m.form & (1 << g) != 0 {
                parts.push(if g < self.n {
                    format!("dx{}", g + 1)
                } else {
                    format!("dxi{}", g - self.n + 1)
                });
            }
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    /// Wedge sign of merging two disjoint ordered generator sets: parity of
    /// pairs (g1 in f1, g2 in f2) with g2 < g1.
    fn wedge_sign(f1: u32, f2: u32) -> i64 {
        let mut sign = 0u32;
        let mut rest = f1;
        while rest != 0 {
            let g = rest.trailing_zeros();
            sign += (f2 & ((1u32 << g) - 1)).count_ones();
            rest &= rest - 1;
        }
        if sign % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Contraction by generator g, acting from the left.
    fn contract(form: u32, g: u32) -> Option<(i64, u32)> {
        if form & (1 << g) == 0 {
            return None;
        }
        let below = (form & ((1u32 << g) - 1)).count_ones();
        let sign = if below % 2 == 0 { 1 } else { -1 };
        Some((sign, form & !(1 << g)))
    }

    /// Product of monomials; None when the polynomial degree escapes the
    /// cap (an exact quotient, not an error) or the forms overlap.
    pub fn mul_mono(&self, a: u32, b: u32) -> Option<(i64, u32)> {
        let ma = &self.monos[a as usize];
        let mb = &self.monos[b as usize];
        if ma.form & mb.form != 0 {
            return None;
        }
        let mut poly = ma.poly.clone();
        let mut total = 0u32;
        for (p, q) in poly.iter_mut().zip(&mb.poly) {
            *p += q;
            total += *p as u32;
        }
        if total > self.bound {
            return None;
        }
        let sign = Self::wedge_sign(ma.form, mb.form);
        Some((sign, self.index[&Mono { poly, form: ma.form | mb.form }]))
    }

    /// Graded sign (-1)^{|a||b|} for basis monomials.
    pub fn koszul(&self, a: u32, b: u32) -> i64 {
        let da = self.monos[a as usize].form.count_ones();
        let db = self.monos[b as usize].form.count_ones();
        if (da * db) % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// de Rham differential df ^ omega.
    pub fn d_mono(&self, id: u32) -> IElt {
        let m = &self.monos[id as usize];
        let mut out = Vec::new();
        for v in 0..(2 * self.n) {
            let e = m.poly[v];
            if e == 0 {
                continue;
            }
            let g = v as u32; // generator bit for d of variable v
            if m.form & (1 << g) != 0 {
                continue;
            }
            // dvar lands on the left of the existing form
            let sign = Self::wedge_sign(1 << g, m.form);
            let mut poly = m.poly.clone();
            poly[v] -= 1;
            let nid = self.index[&Mono { poly, form: m.form | (1 << g) }];
            out.push((nid, sign * e as i64));
        }
        canon(out)
    }

    /// i_pi = sum_i iota_{dx_i} iota_{dxi_i}.
    pub fn ipi_mono(&self, id: u32) -> IElt {
        let m = &self.monos[id as usize];
        let mut out = Vec::new();
        for i in 0..self.n {
            let gxi = (self.n + i) as u32;
            let gx = i as u32;
            if let Some((s1, f1)) = Self::contract(m.form, gxi) {
                if let Some((s2, f2)) = Self::contract(f1, gx) {
                    let nid = self.index[&Mono { poly: m.poly.clone(), form: f2 }];
                    out.push((nid, s1 * s2));
                }
            }
        }
        canon(out)
    }

    fn apply_linear(&self, op: impl Fn(u32) -> IElt, e: &IElt) -> IElt {
        let mut out = Vec::new();
        for (id, c) in e {
            for (nid, k) in op(*id) {
                out.push((nid, k * c));
            }
        }
        canon(out)
    }

    /// L_pi = i_pi d - d i_pi; lowers polynomial degree by one, exact.
    pub fn lpi_mono(&self, id: u32) -> IElt {
        let a = self.apply_linear(|m| self.ipi_mono(m), &self.d_mono(id));
        let b = self.apply_linear(|m| self.d_mono(m), &self.ipi_mono(id));
        add_scaled(&a, &b, -1)
    }

    pub fn lpi_elt(&self, e: &IElt) -> IElt {
        self.apply_linear(|m| self.lpi_mono(m), e)
    }

    pub fn mul_elt(&self, a: &IElt, b: &IElt) -> IElt {
        let mut out = Vec::new();
        for (i, c) in a {
            for (j, d) in b {
                if let Some((s, k)) = self.mul_mono(*i, *j) {
                    out.push((k, s * c * d));
                }
            }
        }
        canon(out)
    }

    /// {a, b} = L(ab) - (La)b - (-1)^{|a|} a (Lb), for basis monomials.
    pub fn bracket_mono(&self, a: u32, b: u32) -> IElt {
        let ab = match self.mul_mono(a, b) {
            Some((s, k)) => vec![(k, s)],
            None => Vec::new(),
        };
        let mut out = self.lpi_elt(&ab);
        let la = self.lpi_mono(a);
        for (i, c) in &la {
            if let Some((s, k)) = self.mul_mono(*i, b) {
                out = add_scaled(&out, &vec![(k, s * c)], -1);
            }
        }
        let sa = if self.monos[a as usize].form.count_ones() % 2 == 0 { 1 } else { -1 };
        let lb = self.lpi_mono(b);
        for (j, c) in &lb {
            if let Some((s, k)) = self.mul_mono(a, *j) {
                out = add_scaled(&out, &vec![(k, s * c)], -sa);
            }
        }
        out
    }

    pub fn bracket_elt(&self, a: &IElt, b: &IElt) -> IElt {
        let mut out = Vec::new();
        for (i, c) in a {
            for (j, d) in b {
                for (k, s) in self.bracket_mono(*i, *j) {
                    out.push((k, s * c * d));
                }
            }
        }
        canon(out)
    }
}

// ---- scalar-coefficient elements for twists ------------------------------

/// An element with coefficients in S (rationals or q-series).
pub type SElt<S> = Vec<(u32, S)>;

pub fn scanon<S: Coeff>(mut terms: Vec<(u32, S)>) -> SElt<S> {
    terms.sort_by_key(|t| t.0);
    let mut out: SElt<S> = Vec::with_capacity(terms.len());
    for (id, c) in terms {
        match out.last_mut() {
            Some((lid, lc)) if *lid == id => {
                *lc = lc.add(&c);
            }
            _ => out.push((id, c)),
        }
    }
    out.retain(|(_, c)| !c.vanishes());
    out
}

impl OddCotangentModel {
    pub fn smul_elt<S: Coeff>(&self, a: &SElt<S>, b: &SElt<S>) -> SElt<S> {
        let mut out = Vec::new();
        for (i, c) in a {
            for (j, d) in b {
                if let Some((s, k)) = self.mul_mono(*i, *j) {
                    out.push((k, c.mul(d).scale(&crate::rational::rat(s))));
                }
            }
        }
        scanon(out)
    }

    pub fn slpi_elt<S: Coeff>(&self, e: &SElt<S>) -> SElt<S> {
        let mut out = Vec::new();
        for (id, c) in e {
            for (nid, k) in self.lpi_mono(*id) {
                out.push((nid, c.scale(&crate::rational::rat(k))));
            }
        }
        scanon(out)
    }

    pub fn sbracket_elt<S: Coeff>(&self, a: &SElt<S>, b: &SElt<S>) -> SElt<S> {
        let mut out = Vec::new();
        for (i, c) in a {
            for (j, d) in b {
                for (k, s) in self.bracket_mono(*i, *j) {
                    out.push((k, c.mul(d).scale(&crate::rational::rat(s))));
                }
            }
        }
        scanon(out)
    }

    pub fn sadd<S: Coeff>(&self, a: &SElt<S>, b: &SElt<S>) -> SElt<S> {
        let mut v = a.clone();
        v.extend(b.iter().cloned());
        scanon(v)
    }

    pub fn sneg<S: Coeff>(&self, a: &SElt<S>) -> SElt<S> {
        a.iter().map(|(i, c)| (*i, c.neg())).collect()
    }

    /// Keep terms with polynomial degree <= cap; used for windowed
    /// comparisons where junk can only live in high polynomial degree.
    pub fn restrict_polydeg<S: Coeff>(&self, e: &SElt<S>, cap: u32) -> SElt<S> {
        e.iter()
            .filter(|(id, _)| self.poly_degree(*id) <= cap)
            .cloned()
            .collect()
    }
}

/// Lift a rational-coefficient element into scalar coefficients.
pub fn lift_elt<S: Coeff>(e: &[(u32, Rational)], proto: &S) -> SElt<S> {
    e.iter().map(|(i, c)| (*i, proto.lift(c))).collect()
}
