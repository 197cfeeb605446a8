//! Sparse exact elimination: columns are inserted one at a time into an echelon basis
//! keyed by leading term, remembering how each basis vector combines the inserted columns.

use std::collections::BTreeMap;

use crate::error::Result;
use crate::lin::Lin;
use crate::scalar::Scalar;

struct Row<K> {
    vec: BTreeMap<K, Scalar>,
    combo: BTreeMap<usize, Scalar>,
}

pub struct Echelon<K: Ord + Clone> {
    rows: BTreeMap<K, Row<K>>,
    ncols: usize,
    null: Vec<BTreeMap<usize, Scalar>>,
}

fn axpy<K: Ord + Clone>(dst: &mut BTreeMap<K, Scalar>, src: &BTreeMap<K, Scalar>, c: &Scalar) -> Result<()> {
    for (k, v) in src {
        let t = c.try_mul(v)?;
        match dst.get_mut(k) {
            Some(x) => {
                *x = x.try_add(&t)?;
                if x.is_zero() {
                    dst.remove(k);
                }
            }
            None => {
                if !t.is_zero() {
                    dst.insert(k.clone(), t);
                }
            }
        }
    }
    Ok(())
}

fn scale<T: Ord>(m: BTreeMap<T, Scalar>, by: &Scalar) -> Result<BTreeMap<T, Scalar>> {
    m.into_iter().map(|(k, c)| Ok((k, c.try_mul(by)?))).collect()
}

impl<K: Ord + Clone> Default for Echelon<K> {
    fn default() -> Self {
        Self::new()
    }
}

impl<K: Ord + Clone> Echelon<K> {
    pub fn new() -> Self {
        Echelon { rows: BTreeMap::new(), ncols: 0, null: Vec::new() }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Kernel vectors found so far, as combinations of column indices.
    pub fn nullspace(&self) -> &[BTreeMap<usize, Scalar>] {
        &self.null
    }

    /// Reduce `v` against the basis; returns the residual and the combination subtracted.
    fn reduce(&self, mut v: BTreeMap<K, Scalar>) -> Result<(BTreeMap<K, Scalar>, BTreeMap<usize, Scalar>)> {
        let mut used = BTreeMap::new();
        let mut bound: Option<K> = None;
        loop {
            let next = {
                let mut it: Box<dyn Iterator<Item = (&K, &Scalar)>> = match &bound {
                    None => Box::new(v.iter().rev()),
                    Some(b) => Box::new(v.range(..b.clone()).rev()),
                };
                it.find(|(k, _)| self.rows.contains_key(*k)).map(|(k, c)| (k.clone(), c.clone()))
            };
            let Some((k, c)) = next else { break };
            let row = &self.rows[&k];
            let f = -c;
            axpy(&mut v, &row.vec, &f)?;
            axpy(&mut used, &row.combo, &f)?;
            bound = Some(k);
        }
        Ok((v, used))
    }

    /// Insert the next column; returns its index.
    pub fn push(&mut self, col: &Lin<K>) -> Result<usize> {
        let j = self.ncols;
        self.ncols += 1;
        let v: BTreeMap<K, Scalar> = col.iter().map(|(k, c)| (k.clone(), c.clone())).collect();
        let (v, mut combo) = self.reduce(v)?;
        combo.insert(j, Scalar::one());
        match v.keys().next_back().cloned() {
            None => self.null.push(combo),
            Some(lead) => {
                let inv = v[&lead].inv()?;
                let row = Row { vec: scale(v, &inv)?, combo: scale(combo, &inv)? };
                self.rows.insert(lead, row);
            }
        }
        Ok(j)
    }

    /// Some x with Σ x_j col_j = target, or None when target is outside the span.
    pub fn solve(&self, target: &Lin<K>) -> Result<Option<BTreeMap<usize, Scalar>>> {
        let v: BTreeMap<K, Scalar> = target.iter().map(|(k, c)| (k.clone(), c.clone())).collect();
        let (res, used) = self.reduce(v)?;
        if !res.is_empty() {
            return Ok(None);
        }
        Ok(Some(used.into_iter().map(|(j, c)| (j, -c)).filter(|(_, c)| !c.is_zero()).collect()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(terms: &[(u32, i64)]) -> Lin<u32> {
        terms.iter().map(|&(k, c)| (k, Scalar::from_int(c))).collect()
    }

    #[test]
    fn solves_and_finds_kernel() {
        let mut e = Echelon::new();
        e.push(&v(&[(0, 1), (1, 1)])).unwrap();
        e.push(&v(&[(1, 1), (2, 1)])).unwrap();
        e.push(&v(&[(0, 1), (2, -1)])).unwrap();
        assert_eq!(e.rank(), 2);
        assert_eq!(e.nullspace().len(), 1);
        let x = e.solve(&v(&[(0, 2), (1, 3), (2, 1)])).unwrap().unwrap();
        let mut back = Lin::zero();
        let cols = [v(&[(0, 1), (1, 1)]), v(&[(1, 1), (2, 1)]), v(&[(0, 1), (2, -1)])];
        for (j, c) in &x {
            back.add_scaled(&cols[*j], c);
        }
        assert_eq!(back, v(&[(0, 2), (1, 3), (2, 1)]));
        assert!(e.solve(&v(&[(0, 1)])).unwrap().is_none());
    }
}
