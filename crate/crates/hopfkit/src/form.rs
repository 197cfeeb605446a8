//! Bilinear forms H ⊗ U → k on pairs of coalgebras: closed formulas, tables, and the
//! convolution operations (product, inverse, exponential) built from coproducts.

use std::collections::BTreeMap;
use std::sync::Arc;

use dashmap::DashMap;

use crate::error::{Error, Result};
use crate::hopf::HopfData;
use crate::pres::{Element, Monomial, Window};
use crate::scalar::Scalar;
use crate::tensor::Tensor;

pub trait Form: Send + Sync {
    fn name(&self) -> String;
    /// Coalgebra of the first argument.
    fn left(&self) -> &Arc<HopfData>;
    /// Coalgebra of the second argument.
    fn right(&self) -> &Arc<HopfData>;
    fn eval_mono(&self, x: &Monomial, y: &Monomial) -> Result<Scalar>;
}

pub type FormRef = Arc<dyn Form>;

pub fn eval(f: &dyn Form, x: &Element, y: &Element) -> Result<Scalar> {
    let mut acc = Scalar::zero();
    for (m, c) in x.iter() {
        for (n, d) in y.iter() {
            let v = f.eval_mono(m, n)?;
            if !v.is_zero() {
                acc = acc.try_add(&c.try_mul(d)?.try_mul(&v)?)?;
            }
        }
    }
    Ok(acc)
}

/// Contract two adjacent slots of a tensor with a form.
pub fn contract_pair(f: &dyn Form, t: &Tensor, from: usize) -> Result<Tensor> {
    crate::tensor::contract(t, from, 2, |k| f.eval_mono(&k[0], &k[1]))
}

type MonoFn = dyn Fn(&Monomial, &Monomial) -> Result<Scalar> + Send + Sync;

/// A form given by a formula on basis monomials.
pub struct Closed {
    name: String,
    left: Arc<HopfData>,
    right: Arc<HopfData>,
    f: Box<MonoFn>,
}

impl Closed {
    pub fn new(
        name: &str,
        left: Arc<HopfData>,
        right: Arc<HopfData>,
        f: impl Fn(&Monomial, &Monomial) -> Result<Scalar> + Send + Sync + 'static,
    ) -> FormRef {
        Arc::new(Closed { name: name.into(), left, right, f: Box::new(f) })
    }
}

impl Form for Closed {
    fn name(&self) -> String {
        self.name.clone()
    }
    fn left(&self) -> &Arc<HopfData> {
        &self.left
    }
    fn right(&self) -> &Arc<HopfData> {
        &self.right
    }
    fn eval_mono(&self, x: &Monomial, y: &Monomial) -> Result<Scalar> {
        (self.f)(x, y)
    }
}

/// ε ⊗ ε, the unit of the convolution algebra.
pub fn counit_form(left: Arc<HopfData>, right: Arc<HopfData>) -> FormRef {
    let (l, r) = (left.clone(), right.clone());
    Closed::new("eps", left, right, move |x, y| Ok(&l.counit_mono(x) * &r.counit_mono(y)))
}

/// (f * g)(x, y) = f(x₁, y₁) g(x₂, y₂).
pub struct Convolution {
    f: FormRef,
    g: FormRef,
    memo: DashMap<(Monomial, Monomial), Scalar>,
}

pub fn convolution(f: FormRef, g: FormRef) -> FormRef {
    Arc::new(Convolution { f, g, memo: DashMap::new() })
}

impl Form for Convolution {
    fn name(&self) -> String {
        format!("({} * {})", self.f.name(), self.g.name())
    }
    fn left(&self) -> &Arc<HopfData> {
        self.f.left()
    }
    fn right(&self) -> &Arc<HopfData> {
        self.f.right()
    }
    fn eval_mono(&self, x: &Monomial, y: &Monomial) -> Result<Scalar> {
        let key = (x.clone(), y.clone());
        if let Some(v) = self.memo.get(&key) {
            return Ok(v.clone());
        }
        let dx = self.left().delta_mono(x)?;
        let dy = self.right().delta_mono(y)?;
        let mut acc = Scalar::zero();
        for (kx, cx) in dx.iter() {
            for (ky, cy) in dy.iter() {
                let a = self.f.eval_mono(&kx[0], &ky[0])?;
                if a.is_zero() {
                    continue;
                }
                let b = self.g.eval_mono(&kx[1], &ky[1])?;
                if !b.is_zero() {
                    acc = acc.try_add(&cx.try_mul(cy)?.try_mul(&a)?.try_mul(&b)?)?;
                }
            }
        }
        self.memo.insert(key, acc.clone());
        Ok(acc)
    }
}

/// Convolution inverse, solved degree by degree from f * f⁻¹ = ε ⊗ ε.
///
/// Needs a filtered coproduct: every term of Δ(x) other than ℓ ⊗ x has a second leg of
/// strictly smaller degree.
pub struct Inverse {
    f: FormRef,
    memo: DashMap<(Monomial, Monomial), Scalar>,
}

pub fn convolution_inverse(f: FormRef) -> FormRef {
    Arc::new(Inverse { f, memo: DashMap::new() })
}

impl Form for Inverse {
    fn name(&self) -> String {
        format!("{}^-1", self.f.name())
    }
    fn left(&self) -> &Arc<HopfData> {
        self.f.left()
    }
    fn right(&self) -> &Arc<HopfData> {
        self.f.right()
    }
    fn eval_mono(&self, x: &Monomial, y: &Monomial) -> Result<Scalar> {
        let key = (x.clone(), y.clone());
        if let Some(v) = self.memo.get(&key) {
            return Ok(v.clone());
        }
        let (lh, rh) = (self.left(), self.right());
        let (pl, pr) = (lh.p(), rh.p());
        let top = pl.degree(x) + pr.degree(y);
        let dx = lh.delta_mono(x)?;
        let dy = rh.delta_mono(y)?;
        let mut diag = Scalar::zero();
        let mut rest = &lh.counit_mono(x) * &rh.counit_mono(y);
        for (kx, cx) in dx.iter() {
            for (ky, cy) in dy.iter() {
                let a = self.f.eval_mono(&kx[0], &ky[0])?;
                if a.is_zero() {
                    continue;
                }
                let w = cx.try_mul(cy)?.try_mul(&a)?;
                if &kx[1] == x && &ky[1] == y {
                    diag = diag.try_add(&w)?;
                } else {
                    if pl.degree(&kx[1]) + pr.degree(&ky[1]) >= top {
                        return Err(Error::NotInvertible(format!(
                            "{}: coproduct is not triangular at ({}, {})",
                            self.f.name(),
                            pl.fmt_mono(x),
                            pr.fmt_mono(y)
                        )));
                    }
                    let b = self.eval_mono(&kx[1], &ky[1])?;
                    rest = rest.try_sub(&w.try_mul(&b)?)?;
                }
            }
        }
        if diag.is_zero() {
            return Err(Error::NotInvertible(format!("{} at ({}, {})", self.f.name(), pl.fmt_mono(x), pr.fmt_mono(y))));
        }
        let v = rest.try_div(&diag)?;
        self.memo.insert(key, v.clone());
        Ok(v)
    }
}

/// e^η = Σ η^{*n}/n!, for η vanishing whenever either argument has degree 0, so that
/// η^{*n}(x, y) = 0 once n exceeds deg x or deg y.
pub struct Exp {
    eta: FormRef,
    powers: Vec<FormRef>,
}

pub fn exp_form(eta: FormRef, max_power: usize) -> FormRef {
    let mut powers = vec![counit_form(eta.left().clone(), eta.right().clone())];
    for n in 1..=max_power {
        let prev = powers[n - 1].clone();
        powers.push(if n == 1 { eta.clone() } else { convolution(prev, eta.clone()) });
    }
    Arc::new(Exp { eta, powers })
}

impl Form for Exp {
    fn name(&self) -> String {
        format!("exp({})", self.eta.name())
    }
    fn left(&self) -> &Arc<HopfData> {
        self.eta.left()
    }
    fn right(&self) -> &Arc<HopfData> {
        self.eta.right()
    }
    fn eval_mono(&self, x: &Monomial, y: &Monomial) -> Result<Scalar> {
        let n = self.left().p().degree(x).min(self.right().p().degree(y)) as usize;
        if n >= self.powers.len() {
            return Err(Error::Window(format!("exp series truncated at power {}", self.powers.len() - 1)));
        }
        let mut acc = Scalar::zero();
        for (k, pw) in self.powers.iter().enumerate().take(n + 1) {
            let v = pw.eval_mono(x, y)?;
            if !v.is_zero() {
                acc = acc.try_add(&v.try_div(&Scalar::factorial(k as u64))?)?;
            }
        }
        Ok(acc)
    }
}

/// Values stored for every basis pair inside a window; zero on missing pairs inside it.
pub struct Table {
    name: String,
    left: Arc<HopfData>,
    right: Arc<HopfData>,
    window: Window,
    pub values: BTreeMap<(Monomial, Monomial), Scalar>,
}

pub fn table_form(name: &str, left: Arc<HopfData>, right: Arc<HopfData>, window: Window, values: BTreeMap<(Monomial, Monomial), Scalar>) -> FormRef {
    Arc::new(Table { name: name.into(), left, right, window, values })
}

/// Tabulate any form on the window.
pub fn materialize(f: &dyn Form, w: Window) -> Result<BTreeMap<(Monomial, Monomial), Scalar>> {
    let mut out = BTreeMap::new();
    let lb = f.left().p().enumerate_basis(w);
    let rb = f.right().p().enumerate_basis(w);
    for x in &lb {
        for y in &rb {
            let v = f.eval_mono(x, y)?;
            if !v.is_zero() {
                out.insert((x.clone(), y.clone()), v);
            }
        }
    }
    Ok(out)
}

fn in_window(h: &HopfData, m: &Monomial, w: Window) -> bool {
    h.p().degree(m) <= w.max_degree && h.p().max_group_exp(m) <= w.group_bound
}

impl Form for Table {
    fn name(&self) -> String {
        self.name.clone()
    }
    fn left(&self) -> &Arc<HopfData> {
        &self.left
    }
    fn right(&self) -> &Arc<HopfData> {
        &self.right
    }
    fn eval_mono(&self, x: &Monomial, y: &Monomial) -> Result<Scalar> {
        if !in_window(&self.left, x, self.window) || !in_window(&self.right, y, self.window) {
            return Err(Error::Window(format!(
                "{} tabulated on {} only, asked at ({}, {})",
                self.name,
                self.window,
                self.left.p().fmt_mono(x),
                self.right.p().fmt_mono(y)
            )));
        }
        Ok(self.values.get(&(x.clone(), y.clone())).cloned().unwrap_or_else(Scalar::zero))
    }
}
