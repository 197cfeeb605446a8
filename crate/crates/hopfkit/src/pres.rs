//! Finitely presented algebras with a PBW-type canonical basis.
//!
//! A canonical monomial is an exponent vector over the generator list, read in
//! list order. Straightening uses rules on out-of-order letter pairs
//! (later letter, earlier letter) and optional power rules x^N → rhs.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use dashmap::DashMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lin::Lin;
use crate::scalar::{parse_scalar, Scalar};

pub const REWRITE_BUDGET: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub Vec<i32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn last_nonzero(&self) -> Option<usize> {
        self.0.iter().rposition(|&e| e != 0)
    }
}

pub type Element = Lin<Monomial>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: usize,
    pub inv: bool,
}

impl Letter {
    pub fn new(gen: usize) -> Self {
        Letter { gen, inv: false }
    }
    pub fn inverse(gen: usize) -> Self {
        Letter { gen, inv: true }
    }
    fn sign(&self) -> i32 {
        if self.inv {
            -1
        } else {
            1
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GenKind {
    Poly,
    Group,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub kind: GenKind,
    pub degree: u32,
}

/// Truncation used by every sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Window {
    pub max_degree: u32,
    pub group_bound: u32,
}

impl Window {
    pub fn new(max_degree: u32, group_bound: u32) -> Self {
        Window { max_degree, group_bound }
    }

    /// Parse "D,G".
    pub fn parse(s: &str) -> Result<Self> {
        let (d, g) = s.split_once(',').ok_or_else(|| Error::Other(format!("window must be D,G: {s}")))?;
        let d = d.trim().parse().map_err(|_| Error::Other(format!("bad window degree: {d}")))?;
        let g = g.trim().parse().map_err(|_| Error::Other(format!("bad window group bound: {g}")))?;
        Ok(Window::new(d, g))
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.max_degree, self.group_bound)
    }
}

struct Budget {
    left: usize,
}

impl Budget {
    fn new() -> Self {
        Budget { left: REWRITE_BUDGET }
    }
    fn tick(&mut self) -> Result<()> {
        if self.left == 0 {
            return Err(Error::Budget(REWRITE_BUDGET));
        }
        self.left -= 1;
        Ok(())
    }
}

pub struct Presentation {
    pub name: String,
    pub gens: Vec<Generator>,
    pub order: u32,
    pair_rules: HashMap<(Letter, Letter), Element>,
    power_rules: HashMap<usize, (u32, Element)>,
    memo: DashMap<(Monomial, Letter), Element>,
}

impl fmt::Debug for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Presentation({})", self.name)
    }
}

impl Presentation {
    pub fn ngens(&self) -> usize {
        self.gens.len()
    }

    pub fn gen_index(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }

    pub fn is_group(&self, i: usize) -> bool {
        self.gens[i].kind == GenKind::Group
    }

    pub fn one(&self) -> Monomial {
        Monomial::one(self.ngens())
    }

    pub fn unit(&self) -> Element {
        Element::basis(self.one())
    }

    pub fn degree(&self, m: &Monomial) -> u32 {
        m.0.iter()
            .zip(&self.gens)
            .filter(|(_, g)| g.kind == GenKind::Poly)
            .map(|(&e, g)| e as u32 * g.degree)
            .sum()
    }

    pub fn max_group_exp(&self, m: &Monomial) -> u32 {
        m.0.iter()
            .zip(&self.gens)
            .filter(|(_, g)| g.kind == GenKind::Group)
            .map(|(&e, _)| e.unsigned_abs())
            .max()
            .unwrap_or(0)
    }

    pub fn element_degree(&self, e: &Element) -> u32 {
        e.keys().map(|m| self.degree(m)).max().unwrap_or(0)
    }

    /// All letters, inverse letters included for group generators.
    pub fn letters(&self) -> Vec<Letter> {
        let mut out = Vec::new();
        for (i, g) in self.gens.iter().enumerate() {
            out.push(Letter::new(i));
            if g.kind == GenKind::Group {
                out.push(Letter::inverse(i));
            }
        }
        out
    }

    pub fn letter_mono(&self, l: Letter) -> Monomial {
        let mut m = self.one();
        m.0[l.gen] = l.sign();
        m
    }

    pub fn gen_mono(&self, i: usize, e: i32) -> Monomial {
        let mut m = self.one();
        m.0[i] = e;
        m
    }

    /// Canonical word of a monomial.
    pub fn word(&self, m: &Monomial) -> Vec<Letter> {
        let mut w = Vec::new();
        for (i, &e) in m.0.iter().enumerate() {
            let l = if e < 0 { Letter::inverse(i) } else { Letter::new(i) };
            for _ in 0..e.unsigned_abs() {
                w.push(l);
            }
        }
        w
    }

    pub fn pair_rule(&self, later: Letter, earlier: Letter) -> Option<&Element> {
        self.pair_rules.get(&(later, earlier))
    }

    pub fn power_rule(&self, gen: usize) -> Option<&(u32, Element)> {
        self.power_rules.get(&gen)
    }

    pub fn pair_rules(&self) -> impl Iterator<Item = (&(Letter, Letter), &Element)> {
        self.pair_rules.iter()
    }

    fn mul_letter_b(&self, m: &Monomial, l: Letter, b: &mut Budget) -> Result<Element> {
        let key = (m.clone(), l);
        if let Some(v) = self.memo.get(&key) {
            return Ok(v.clone());
        }
        b.tick()?;
        let res = self.mul_letter_raw(m, l, b)?;
        self.memo.insert(key, res.clone());
        Ok(res)
    }

    fn mul_letter_raw(&self, m: &Monomial, l: Letter, b: &mut Budget) -> Result<Element> {
        let i = l.gen;
        if l.inv && !self.is_group(i) {
            return Err(Error::Presentation(format!("{} is not invertible", self.gens[i].name)));
        }
        match m.last_nonzero() {
            Some(j) if j > i => {
                let lj = if m.0[j] < 0 { Letter::inverse(j) } else { Letter::new(j) };
                let rhs = self
                    .pair_rules
                    .get(&(lj, l))
                    .ok_or_else(|| Error::MissingRule(format!("{}·{}", self.letter_name(lj), self.letter_name(l))))?;
                let mut pre = m.clone();
                pre.0[j] -= lj.sign();
                self.mul_mono_elem_b(&pre, rhs, b)
            }
            _ => {
                let mut e = m.clone();
                e.0[i] += l.sign();
                if let Some((n, rhs)) = self.power_rules.get(&i) {
                    if e.0[i] >= *n as i32 {
                        let mut pre = e;
                        pre.0[i] -= *n as i32;
                        return self.mul_mono_elem_b(&pre, rhs, b);
                    }
                }
                Ok(Element::basis(e))
            }
        }
    }

    fn mul_mono_elem_b(&self, pre: &Monomial, rhs: &Element, b: &mut Budget) -> Result<Element> {
        let mut out = Element::zero();
        for (mono, c) in rhs.iter() {
            out.add_scaled(&self.mul_mono_b(pre, mono, b)?, c);
        }
        Ok(out)
    }

    fn mul_mono_b(&self, x: &Monomial, y: &Monomial, b: &mut Budget) -> Result<Element> {
        let mut cur = Element::basis(x.clone());
        for l in self.word(y) {
            cur = self.mul_elem_letter_b(&cur, l, b)?;
        }
        Ok(cur)
    }

    fn mul_elem_letter_b(&self, x: &Element, l: Letter, b: &mut Budget) -> Result<Element> {
        let mut out = Element::zero();
        for (m, c) in x.iter() {
            out.add_scaled(&self.mul_letter_b(m, l, b)?, c);
        }
        Ok(out)
    }

    pub fn mul_letter(&self, m: &Monomial, l: Letter) -> Result<Element> {
        self.mul_letter_b(m, l, &mut Budget::new())
    }

    pub fn mul_mono(&self, x: &Monomial, y: &Monomial) -> Result<Element> {
        if x.is_one() {
            return Ok(Element::basis(y.clone()));
        }
        if y.is_one() {
            return Ok(Element::basis(x.clone()));
        }
        self.mul_mono_b(x, y, &mut Budget::new())
    }

    pub fn mul(&self, x: &Element, y: &Element) -> Result<Element> {
        let mut out = Element::zero();
        for (a, c) in x.iter() {
            for (bm, d) in y.iter() {
                out.add_scaled(&self.mul_mono(a, bm)?, &(c * d));
            }
        }
        Ok(out)
    }

    pub fn normal_form(&self, word: &[Letter]) -> Result<Element> {
        let mut b = Budget::new();
        let mut cur = self.unit();
        for &l in word {
            cur = self.mul_elem_letter_b(&cur, l, &mut b)?;
        }
        Ok(cur)
    }

    pub fn pow(&self, x: &Element, n: u32) -> Result<Element> {
        let mut acc = self.unit();
        for _ in 0..n {
            acc = self.mul(&acc, x)?;
        }
        Ok(acc)
    }

    /// Canonical monomials with degree ≤ D and group exponents in [−G, G].
    pub fn enumerate_basis(&self, w: Window) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut cur = vec![0i32; self.ngens()];
        self.enum_rec(0, w.max_degree, w.group_bound as i32, &mut cur, &mut out);
        out.sort_by(|a, b| self.degree(a).cmp(&self.degree(b)).then_with(|| a.cmp(b)));
        out
    }

    fn enum_rec(&self, i: usize, deg_left: u32, g: i32, cur: &mut Vec<i32>, out: &mut Vec<Monomial>) {
        if i == self.ngens() {
            out.push(Monomial(cur.clone()));
            return;
        }
        let gen = &self.gens[i];
        match gen.kind {
            GenKind::Group => {
                for e in -g..=g {
                    cur[i] = e;
                    self.enum_rec(i + 1, deg_left, g, cur, out);
                }
            }
            GenKind::Poly => {
                let cap = self.power_rules.get(&i).map(|(n, _)| *n as i32 - 1).unwrap_or(i32::MAX);
                let mut e = 0;
                loop {
                    if e > cap || (gen.degree > 0 && e as u32 * gen.degree > deg_left) || (gen.degree == 0 && e > g) {
                        break;
                    }
                    cur[i] = e;
                    self.enum_rec(i + 1, deg_left - e as u32 * gen.degree, g, cur, out);
                    e += 1;
                }
            }
        }
        cur[i] = 0;
    }

    pub fn letter_name(&self, l: Letter) -> String {
        let n = &self.gens[l.gen].name;
        if l.inv {
            format!("{n}^-1")
        } else {
            n.clone()
        }
    }

    pub fn fmt_mono(&self, m: &Monomial) -> String {
        let parts: Vec<String> = m
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(i, &e)| if e == 1 { self.gens[i].name.clone() } else { format!("{}^{}", self.gens[i].name, e) })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join(" ")
        }
    }

    pub fn fmt_elem(&self, e: &Element) -> String {
        fmt_lin(e, |m| self.fmt_mono(m))
    }

    /// Parse a canonical monomial such as "b c^2 h^-1" (exponents add per generator).
    pub fn parse_mono(&self, s: &str) -> Result<Monomial> {
        parse_mono_names(&self.gens, s)
    }

    /// Parse an arbitrary word such as "g b g^-1" and return its normal form.
    pub fn parse_word(&self, s: &str) -> Result<Element> {
        let mut w = Vec::new();
        for tok in s.split_whitespace() {
            if tok == "1" {
                continue;
            }
            let (name, e) = split_power(tok)?;
            let i = self.gen_index(name).ok_or_else(|| Error::Other(format!("unknown generator {name}")))?;
            let l = if e < 0 { Letter::inverse(i) } else { Letter::new(i) };
            for _ in 0..e.unsigned_abs() {
                w.push(l);
            }
        }
        self.normal_form(&w)
    }

    /// Parse "coeff*mono + coeff*mono ..." given as a list of (coeff, monomial) strings.
    pub fn elem(&self, terms: &[(&str, &str)]) -> Result<Element> {
        let mut e = Element::zero();
        for (c, m) in terms {
            e.add_term(self.parse_mono(m)?, parse_scalar(c, self.order)?);
        }
        Ok(e)
    }

    pub fn is_canonical_rhs(&self, lhs: &[Letter], rhs: &Element) -> bool {
        let lhs_deg: u32 = lhs.iter().filter(|l| !self.is_group(l.gen)).map(|l| self.gens[l.gen].degree).sum();
        rhs.keys().all(|m| self.degree(m) <= lhs_deg)
    }
}

fn split_power(tok: &str) -> Result<(&str, i32)> {
    match tok.split_once('^') {
        Some((n, e)) => Ok((n, e.parse().map_err(|_| Error::Other(format!("bad exponent in {tok}")))?)),
        None => Ok((tok, 1)),
    }
}

pub fn parse_mono_names(gens: &[Generator], s: &str) -> Result<Monomial> {
    let mut m = Monomial::one(gens.len());
    for tok in s.split_whitespace() {
        if tok == "1" {
            continue;
        }
        let (name, e) = split_power(tok)?;
        let i = gens
            .iter()
            .position(|g| g.name == name)
            .ok_or_else(|| Error::Other(format!("unknown generator {name}")))?;
        m.0[i] += e;
    }
    for (i, g) in gens.iter().enumerate() {
        if g.kind == GenKind::Poly && m.0[i] < 0 {
            return Err(Error::Other(format!("negative power of {}", g.name)));
        }
    }
    Ok(m)
}

pub fn fmt_lin<K: Ord + Clone>(e: &Lin<K>, f: impl Fn(&K) -> String) -> String {
    if e.is_zero() {
        return "0".into();
    }
    let parts: Vec<String> = e
        .iter()
        .map(|(k, c)| {
            let key = f(k);
            if c.is_one() {
                key
            } else {
                format!("({c})*{key}")
            }
        })
        .collect();
    parts.join(" + ")
}

/// Incremental construction of a presentation.
pub struct Builder {
    name: String,
    gens: Vec<Generator>,
    order: u32,
    pair_rules: HashMap<(Letter, Letter), Element>,
    power_rules: HashMap<usize, (u32, Element)>,
    errors: Vec<String>,
}

impl Builder {
    pub fn new(name: &str, order: u32) -> Self {
        Builder {
            name: name.into(),
            gens: Vec::new(),
            order,
            pair_rules: HashMap::new(),
            power_rules: HashMap::new(),
            errors: Vec::new(),
        }
    }

    pub fn poly(mut self, name: &str, degree: u32) -> Self {
        self.gens.push(Generator { name: name.into(), kind: GenKind::Poly, degree });
        self
    }

    pub fn group(mut self, name: &str) -> Self {
        self.gens.push(Generator { name: name.into(), kind: GenKind::Group, degree: 0 });
        self
    }

    pub fn generator(mut self, g: Generator) -> Self {
        self.gens.push(g);
        self
    }

    pub fn gens(&self) -> &[Generator] {
        &self.gens
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    fn idx(&mut self, name: &str) -> Option<usize> {
        let i = self.gens.iter().position(|g| g.name == name);
        if i.is_none() {
            self.errors.push(format!("unknown generator {name}"));
        }
        i
    }

    fn pair(&self, a: (usize, i32), b: (usize, i32)) -> Monomial {
        let mut m = Monomial::one(self.gens.len());
        m.0[a.0] += a.1;
        m.0[b.0] += b.1;
        m
    }

    fn signs(&self, i: usize) -> Vec<i32> {
        if self.gens[i].kind == GenKind::Group {
            vec![1, -1]
        } else {
            vec![1]
        }
    }

    fn letter(i: usize, s: i32) -> Letter {
        if s < 0 {
            Letter::inverse(i)
        } else {
            Letter::new(i)
        }
    }

    /// x·y = c·y·x, extended to inverse letters of group generators.
    pub fn qcomm(mut self, x: &str, y: &str, c: Scalar) -> Self {
        let (Some(i), Some(j)) = (self.idx(x), self.idx(y)) else { return self };
        if i == j {
            return self;
        }
        // normalize to (later, earlier): later·earlier = c' earlier·later
        let (later, earlier, c) = if i > j { (i, j, c) } else { (j, i, c.inv().expect("nonzero q-commutator")) };
        for s in self.signs(later) {
            for t in self.signs(earlier) {
                let coef = c.pow((s * t) as i64).unwrap();
                let rhs = Element::term(self.pair((earlier, t), (later, s)), coef);
                self.pair_rules.insert((Self::letter(later, s), Self::letter(earlier, t)), rhs);
            }
        }
        self
    }

    pub fn commute(self, x: &str, y: &str) -> Self {
        self.qcomm(x, y, Scalar::one())
    }

    /// Conjugation by a group generator: g·y·g⁻¹ = Σ c·z for each listed poly generator y.
    /// The listed generators must span a g-stable subspace.
    pub fn conj(mut self, g: &str, images: &[(&str, &[(&str, Scalar)])]) -> Self {
        let Some(gi) = self.idx(g) else { return self };
        let ys: Vec<usize> = images.iter().filter_map(|(y, _)| self.gens.iter().position(|x| x.name == *y)).collect();
        let n = ys.len();
        let mut mat = vec![vec![Scalar::zero(); n]; n]; // mat[row = image gen][col = source gen]
        for (col, (_, img)) in images.iter().enumerate() {
            for (z, c) in img.iter() {
                match ys.iter().position(|&y| self.gens[y].name == *z) {
                    Some(row) => mat[row][col] = c.clone(),
                    None => self.errors.push(format!("conjugation image {z} outside the listed span")),
                }
            }
        }
        let Some(inv) = invert_matrix(&mat) else {
            self.errors.push(format!("conjugation by {g} is not invertible"));
            return self;
        };
        for s in [1i32, -1] {
            // φ = action of g^s, ψ = action of g^{-s}
            let (phi, psi) = if s == 1 { (&mat, &inv) } else { (&inv, &mat) };
            for (col, &y) in ys.iter().enumerate() {
                let lg = Self::letter(gi, s);
                let ly = Letter::new(y);
                let mut rhs = Element::zero();
                if gi > y {
                    // g^s·y = φ(y)·g^s
                    for (row, &z) in ys.iter().enumerate() {
                        rhs.add_term(self.pair((z, 1), (gi, s)), phi[row][col].clone());
                    }
                    if ys.iter().any(|&z| z > gi) {
                        self.errors.push(format!("conjugation image of {} lies after {g}", self.gens[y].name));
                    }
                    self.pair_rules.insert((lg, ly), rhs);
                } else {
                    // y·g^s = g^s·ψ(y)
                    for (row, &z) in ys.iter().enumerate() {
                        rhs.add_term(self.pair((gi, s), (z, 1)), psi[row][col].clone());
                    }
                    if ys.iter().any(|&z| z < gi) {
                        self.errors.push(format!("conjugation image of {} lies before {g}", self.gens[y].name));
                    }
                    self.pair_rules.insert((ly, lg), rhs);
                }
            }
        }
        self
    }

    /// Explicit rule later·earlier → rhs, with rhs given as (coeff, canonical monomial) pairs.
    pub fn rule(mut self, later: &str, earlier: &str, rhs: &[(Scalar, &str)]) -> Self {
        let (Some(i), Some(j)) = (self.idx(later), self.idx(earlier)) else { return self };
        let (li, lj) = (Letter::new(i), Letter::new(j));
        match self.rhs(rhs) {
            Ok(e) => {
                self.pair_rules.insert((li, lj), e);
            }
            Err(err) => self.errors.push(err.to_string()),
        }
        self
    }

    /// Rule on arbitrary letters (used by generated presentations).
    pub fn letter_rule(mut self, later: Letter, earlier: Letter, rhs: Element) -> Self {
        self.pair_rules.insert((later, earlier), rhs);
        self
    }

    /// Power rule x^n → rhs.
    pub fn power(mut self, x: &str, n: u32, rhs: &[(Scalar, &str)]) -> Self {
        let Some(i) = self.idx(x) else { return self };
        match self.rhs(rhs) {
            Ok(e) => {
                self.power_rules.insert(i, (n, e));
            }
            Err(err) => self.errors.push(err.to_string()),
        }
        self
    }

    pub fn power_elem(mut self, i: usize, n: u32, rhs: Element) -> Self {
        self.power_rules.insert(i, (n, rhs));
        self
    }

    fn rhs(&self, terms: &[(Scalar, &str)]) -> Result<Element> {
        let mut e = Element::zero();
        for (c, m) in terms {
            e.add_term(parse_mono_names(&self.gens, m)?, c.clone());
        }
        Ok(e)
    }

    pub fn build(self) -> Result<Arc<Presentation>> {
        if let Some(e) = self.errors.first() {
            return Err(Error::Presentation(format!("{}: {e}", self.name)));
        }
        let p = Presentation {
            name: self.name,
            gens: self.gens,
            order: self.order,
            pair_rules: self.pair_rules,
            power_rules: self.power_rules,
            memo: DashMap::new(),
        };
        validate(&p)?;
        Ok(Arc::new(p))
    }
}

/// Completeness and triangularity of the rule set.
fn validate(p: &Presentation) -> Result<()> {
    let letters = p.letters();
    for &a in &letters {
        for &b in &letters {
            if a.gen > b.gen && !p.pair_rules.contains_key(&(a, b)) {
                return Err(Error::Presentation(format!(
                    "{}: missing rule for {}·{}",
                    p.name,
                    p.letter_name(a),
                    p.letter_name(b)
                )));
            }
        }
    }
    for ((a, b), rhs) in &p.pair_rules {
        if a.gen <= b.gen {
            return Err(Error::Presentation(format!("{}: rule on in-order pair", p.name)));
        }
        if !p.is_canonical_rhs(&[*a, *b], rhs) {
            return Err(Error::Presentation(format!(
                "{}: rule {}·{} raises degree",
                p.name,
                p.letter_name(*a),
                p.letter_name(*b)
            )));
        }
    }
    for (i, (n, rhs)) in &p.power_rules {
        if p.is_group(*i) || *n < 2 {
            return Err(Error::Presentation(format!("{}: bad power rule", p.name)));
        }
        let lhs_deg = *n * p.gens[*i].degree;
        if rhs.keys().any(|m| p.degree(m) >= lhs_deg && lhs_deg > 0) {
            return Err(Error::Presentation(format!("{}: power rule not triangular", p.name)));
        }
    }
    Ok(())
}

fn invert_matrix(m: &[Vec<Scalar>]) -> Option<Vec<Vec<Scalar>>> {
    let n = m.len();
    let mut a: Vec<Vec<Scalar>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let inv = a[col][col].inv().ok()?;
        for x in a[col].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let pivot_row = a[col].clone();
                for (x, y) in a[r].iter_mut().zip(pivot_row) {
                    *x = &*x - &(&f * &y);
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// One failed overlap in a confluence check.
#[derive(Clone, Debug, Serialize)]
pub struct OverlapFailure {
    pub word: String,
    pub left_first: String,
    pub right_first: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConfluenceReport {
    pub presentation: String,
    pub window: Window,
    pub overlaps_checked: usize,
    pub failures: Vec<OverlapFailure>,
}

impl ConfluenceReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Resolve every overlap a·b·c of rule left sides (pairs, powers, inverse cancellations)
/// of total degree ≤ D both ways and compare normal forms.
pub fn confluence_check(p: &Presentation, w: Window) -> Result<ConfluenceReport> {
    // pieces: single letters and normal powers x^k below the power-rule exponent; x^{n-1}·x·y
    // covers every overlap with x^n
    let mut pieces: Vec<Monomial> = p.letters().into_iter().map(|l| p.letter_mono(l)).collect();
    for (&i, (n, _)) in &p.power_rules {
        for k in 2..*n as i32 {
            pieces.push(p.gen_mono(i, k));
        }
    }
    pieces.sort();
    let letters = p.letters();
    let is_overlap = |x: &Monomial, y: &Monomial| -> bool {
        // the last letter of x and the first letter of y interact
        let (Some(lx), Some(fy)) = (p.word(x).last().copied(), p.word(y).first().copied()) else {
            return false;
        };
        lx.gen > fy.gen
            || (lx.gen == fy.gen && lx.inv != fy.inv)
            || (lx.gen == fy.gen && p.power_rules.contains_key(&lx.gen))
    };
    let _ = letters;
    let mut checked = 0;
    let mut failures = Vec::new();
    for a in &pieces {
        for b in &pieces {
            if !is_overlap(a, b) {
                continue;
            }
            for c in &pieces {
                if !is_overlap(b, c) {
                    continue;
                }
                let deg = p.degree(a) + p.degree(b) + p.degree(c);
                if deg > w.max_degree {
                    continue;
                }
                checked += 1;
                let ab = p.mul_mono(a, b)?;
                let left = p.mul(&ab, &Element::basis(c.clone()))?;
                let bc = p.mul_mono(b, c)?;
                let right = p.mul(&Element::basis(a.clone()), &bc)?;
                if left != right {
                    failures.push(OverlapFailure {
                        word: format!("{} · {} · {}", p.fmt_mono(a), p.fmt_mono(b), p.fmt_mono(c)),
                        left_first: p.fmt_elem(&left),
                        right_first: p.fmt_elem(&right),
                    });
                }
            }
        }
    }
    failures.sort_by(|x, y| x.word.cmp(&y.word));
    Ok(ConfluenceReport { presentation: p.name.clone(), window: w, overlaps_checked: checked, failures })
}

// ---- JSON file format ----

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TermJson {
    pub monomial: String,
    pub coeff: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RuleJson {
    pub lhs: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub power: Option<u32>,
    pub rhs: Vec<TermJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PresentationJson {
    pub name: String,
    pub generators: Vec<Generator>,
    pub rules: Vec<RuleJson>,
    pub cyclotomic_order: u32,
}

pub fn elem_to_json(p: &Presentation, e: &Element) -> Vec<TermJson> {
    e.iter().map(|(m, c)| TermJson { monomial: p.fmt_mono(m), coeff: c.to_string() }).collect()
}

pub fn elem_from_json(gens: &[Generator], order: u32, terms: &[TermJson]) -> Result<Element> {
    let mut e = Element::zero();
    for t in terms {
        e.add_term(parse_mono_names(gens, &t.monomial)?, parse_scalar(&t.coeff, order)?);
    }
    Ok(e)
}

impl Presentation {
    pub fn to_json(&self) -> PresentationJson {
        let mut rules: Vec<RuleJson> = self
            .pair_rules
            .iter()
            .map(|((a, b), rhs)| RuleJson {
                lhs: vec![self.letter_name(*a), self.letter_name(*b)],
                power: None,
                rhs: elem_to_json(self, rhs),
            })
            .collect();
        for (i, (n, rhs)) in &self.power_rules {
            rules.push(RuleJson { lhs: vec![self.gens[*i].name.clone()], power: Some(*n), rhs: elem_to_json(self, rhs) });
        }
        rules.sort_by(|a, b| (&a.lhs, a.power).cmp(&(&b.lhs, b.power)));
        PresentationJson { name: self.name.clone(), generators: self.gens.clone(), rules, cyclotomic_order: self.order }
    }

    pub fn from_json(j: &PresentationJson) -> Result<Arc<Presentation>> {
        let mut b = Builder::new(&j.name, j.cyclotomic_order);
        b.gens = j.generators.clone();
        let letter = |s: &str| -> Result<Letter> {
            let (name, e) = split_power(s)?;
            let i = j
                .generators
                .iter()
                .position(|g| g.name == name)
                .ok_or_else(|| Error::Other(format!("unknown generator {name}")))?;
            Ok(if e < 0 { Letter::inverse(i) } else { Letter::new(i) })
        };
        for r in &j.rules {
            let rhs = elem_from_json(&j.generators, j.cyclotomic_order, &r.rhs)?;
            match (r.power, r.lhs.as_slice()) {
                (Some(n), [x]) => {
                    b = b.power_elem(letter(x)?.gen, n, rhs);
                }
                (None, [x, y]) => {
                    b = b.letter_rule(letter(x)?, letter(y)?, rhs);
                }
                _ => return Err(Error::Presentation("rule lhs must be a pair or a power".into())),
            }
        }
        b.build()
    }
}

/// Exponent-vector embedding of one presentation's monomials into another's.
pub fn embed(m: &Monomial, offset: usize, total: usize) -> Monomial {
    let mut v = vec![0; total];
    v[offset..offset + m.0.len()].copy_from_slice(&m.0);
    Monomial(v)
}

pub fn embed_elem(e: &Element, offset: usize, total: usize) -> Element {
    e.iter().map(|(m, c)| (embed(m, offset, total), c.clone())).collect()
}

/// Map generator names to canonical monomial exponents, as a sorted table.
pub fn name_table(p: &Presentation) -> BTreeMap<String, usize> {
    p.gens.iter().enumerate().map(|(i, g)| (g.name.clone(), i)).collect()
}

/// Normal forms are fixed points: the word of every basis monomial, and of every term of a
/// product of two basis monomials, rewrites to itself.
pub fn verify_normal_form(p: &Presentation, w: Window) -> Result<crate::report::Report> {
    use crate::report::{sweep, Report};
    let t0 = std::time::Instant::now();
    let mut rep = Report::new("normal-form", &p.name).with_window(w);
    let basis = p.enumerate_basis(w);
    let fixed = |m: &Monomial| -> Result<Option<(String, String)>> {
        let nf = p.normal_form(&p.word(m))?;
        Ok((nf != Element::basis(m.clone())).then(|| (p.fmt_elem(&nf), p.fmt_mono(m))))
    };
    rep.add_guarded("basis-words", sweep("basis-words", &basis, |m| p.fmt_mono(m), fixed))?;
    let pairs: Vec<(Monomial, Monomial)> = basis
        .iter()
        .flat_map(|x| basis.iter().filter(move |y| p.degree(x) + p.degree(y) <= w.max_degree).map(move |y| (x.clone(), y.clone())))
        .collect();
    rep.add_guarded("product-terms", sweep("product-terms", &pairs, |(x, y)| format!("{} · {}", p.fmt_mono(x), p.fmt_mono(y)), |(x, y)| {
        let prod = p.mul_mono(x, y)?;
        let mut again = Element::zero();
        for (m, c) in prod.iter() {
            again.add_scaled(&p.normal_form(&p.word(m))?, c);
        }
        Ok((again != prod).then(|| (p.fmt_elem(&again), p.fmt_elem(&prod))))
    }))?;
    Ok(rep.finish(t0))
}
