//! Skeletal semisimple data for a category with one or two objects: 1-morphism labels
//! sorted into hom-cells, fusion multiplicities for composable pairs, and F-symbols.
//!
//! A fusion category is the one-object case, a (bi)module category occupies cells of a
//! partial two-object layout, and a Morita context fills all four cells. Products are
//! written in diagrammatic order: `x` in cell `(i,j)` and `y` in `(j,k)` give `x⊗y` in `(i,k)`.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::numerics::{Mat, Scalar, Tolerance, ONE, ZERO};
use crate::report::FamilyAcc;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SkeletonError {
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("label `{0}` has no dual")]
    NoDual(String),
    #[error("label `{0}` has several dual candidates")]
    AmbiguousDual(String),
    #[error("structure data requires multiplicity-free fusion (`{0}`)")]
    UnsupportedMultiplicity(String),
    #[error("no F-symbols present")]
    NoSymbols,
    #[error("fusion entry {0} is not composable")]
    NotComposable(String),
    #[error("F-symbol entry {0} is not admissible")]
    Inadmissible(String),
    #[error("F-block {0} is singular or not square")]
    SingularBlock(String),
}

/// Key of an F-symbol `[F^{abc}_d]_{e,f}` with `e ∈ a⊗b` and `f ∈ b⊗c`.
pub type FKey = [usize; 6];

/// One square block `F^{abc}_d` with row labels `e` and column labels `f`.
#[derive(Debug, Clone)]
pub struct FBlock {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub mat: Mat,
    pub inv: Mat,
}

impl FBlock {
    pub fn entry(&self, e: usize, f: usize) -> Scalar {
        match (self.rows.iter().position(|&r| r == e), self.cols.iter().position(|&c| c == f)) {
            (Some(i), Some(j)) => self.mat.at(i, j),
            _ => ZERO,
        }
    }

    /// Entry `[F^{-1}]_{f,e}`.
    pub fn inv_entry(&self, f: usize, e: usize) -> Scalar {
        match (self.cols.iter().position(|&c| c == f), self.rows.iter().position(|&r| r == e)) {
            (Some(i), Some(j)) => self.inv.at(i, j),
            _ => ZERO,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Skeleton {
    pub labels: Vec<String>,
    pub cells: Vec<(usize, usize)>,
    pub objects: usize,
    /// Unit label of each object, if that object's endomorphism cell is present.
    pub units: Vec<Option<usize>>,
    index: HashMap<String, usize>,
    mult: Vec<u32>,
    products: Vec<Vec<usize>>,
    duals: Vec<Option<usize>>,
    symbols: Option<BTreeMap<FKey, Scalar>>,
    blocks: HashMap<[usize; 4], FBlock>,
    block_errors: Vec<String>,
}

impl Skeleton {
    /// Builds the skeleton. `fusion` lists `(a, b, c, N_ab^c)`; `symbols`, if present, lists
    /// F-entries. Admissible entries with a unit among `a, b, c` default to 1; any other
    /// admissible entry that is absent is 0.
    pub fn new(
        labels: Vec<String>,
        cells: Vec<(usize, usize)>,
        units: Vec<Option<usize>>,
        fusion: &[(usize, usize, usize, u32)],
        symbols: Option<BTreeMap<FKey, Scalar>>,
    ) -> Result<Skeleton, SkeletonError> {
        let n = labels.len();
        let mut index = HashMap::new();
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(SkeletonError::DuplicateLabel(l.clone()));
            }
        }
        let objects = units.len();
        let mut mult = vec![0u32; n * n * n];
        for &(a, b, c, m) in fusion {
            if cells[a].1 != cells[b].0 || cells[c] != (cells[a].0, cells[b].1) {
                return Err(SkeletonError::NotComposable(format!("({}, {}, {})", labels[a], labels[b], labels[c])));
            }
            mult[(a * n + b) * n + c] = m;
        }
        let mut products = vec![Vec::new(); n * n];
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mult[(a * n + b) * n + c] > 0 {
                        products[a * n + b].push(c);
                    }
                }
            }
        }
        let mut sk = Skeleton {
            labels,
            cells,
            objects,
            units,
            index,
            mult,
            products,
            duals: vec![None; n],
            symbols: None,
            blocks: HashMap::new(),
            block_errors: Vec::new(),
        };
        for x in 0..n {
            sk.duals[x] = sk.find_dual(x).ok();
        }
        if let Some(sym) = symbols {
            sk.attach_symbols(sym)?;
        }
        Ok(sk)
    }

    fn attach_symbols(&mut self, sym: BTreeMap<FKey, Scalar>) -> Result<(), SkeletonError> {
        if !self.is_multiplicity_free() {
            return Err(SkeletonError::UnsupportedMultiplicity("F-symbols".into()));
        }
        for key in sym.keys() {
            if !self.admissible(key) {
                return Err(SkeletonError::Inadmissible(self.key_name(key)));
            }
        }
        let n = self.len();
        let mut blocks = HashMap::new();
        let mut errors = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if !self.composable(a, b) {
                    continue;
                }
                for c in 0..n {
                    if !self.composable(b, c) {
                        continue;
                    }
                    let (src, tgt) = (self.cells[a].0, self.cells[c].1);
                    for d in (0..n).filter(|&d| self.cells[d] == (src, tgt)) {
                        let rows: Vec<usize> =
                            self.prod(a, b).iter().copied().filter(|&e| self.n(e, c, d) > 0).collect();
                        let cols: Vec<usize> =
                            self.prod(b, c).iter().copied().filter(|&f| self.n(a, f, d) > 0).collect();
                        if rows.is_empty() && cols.is_empty() {
                            continue;
                        }
                        let name = format!(
                            "F^{{{},{},{}}}_{}",
                            self.labels[a], self.labels[b], self.labels[c], self.labels[d]
                        );
                        if rows.len() != cols.len() {
                            errors.push(name);
                            continue;
                        }
                        let unit_leg = [a, b, c].iter().any(|&x| self.is_unit(x));
                        let mut mat = Mat::zeros(rows.len(), cols.len());
                        for (i, &e) in rows.iter().enumerate() {
                            for (j, &f) in cols.iter().enumerate() {
                                let v = sym.get(&[a, b, c, d, e, f]).copied();
                                *mat.at_mut(i, j) = v.unwrap_or(if unit_leg { ONE } else { ZERO });
                            }
                        }
                        match mat.inverse() {
                            Some(inv) => {
                                blocks.insert([a, b, c, d], FBlock { rows, cols, mat, inv });
                            }
                            None => errors.push(name),
                        }
                    }
                }
            }
        }
        self.symbols = Some(sym);
        self.blocks = blocks;
        self.block_errors = errors;
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, name: &str) -> Result<usize, SkeletonError> {
        self.index.get(name).copied().ok_or_else(|| SkeletonError::UnknownLabel(name.to_string()))
    }

    pub fn name(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn names(&self, xs: &[usize]) -> Vec<String> {
        xs.iter().map(|&x| self.labels[x].clone()).collect()
    }

    pub fn cell_labels(&self, cell: (usize, usize)) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.cells[x] == cell).collect()
    }

    pub fn n(&self, a: usize, b: usize, c: usize) -> u32 {
        let n = self.len();
        self.mult[(a * n + b) * n + c]
    }

    pub fn prod(&self, a: usize, b: usize) -> &[usize] {
        &self.products[a * self.len() + b]
    }

    pub fn composable(&self, a: usize, b: usize) -> bool {
        self.cells[a].1 == self.cells[b].0
    }

    pub fn is_unit(&self, x: usize) -> bool {
        self.units.contains(&Some(x))
    }

    /// Unit of object `o`; panics if the endomorphism cell of `o` is absent.
    pub fn unit(&self, o: usize) -> usize {
        self.units[o].expect("object has no unit label in this skeleton")
    }

    pub fn is_multiplicity_free(&self) -> bool {
        self.mult.iter().all(|&m| m <= 1)
    }

    pub fn has_symbols(&self) -> bool {
        self.symbols.is_some()
    }

    pub fn symbols(&self) -> Option<&BTreeMap<FKey, Scalar>> {
        self.symbols.as_ref()
    }

    pub fn block_errors(&self) -> &[String] {
        &self.block_errors
    }

    /// Structure tier is usable: symbols present, blocks square and invertible.
    pub fn structure_ready(&self) -> Result<(), SkeletonError> {
        if !self.is_multiplicity_free() {
            return Err(SkeletonError::UnsupportedMultiplicity("structure tier".into()));
        }
        if self.symbols.is_none() {
            return Err(SkeletonError::NoSymbols);
        }
        if let Some(b) = self.block_errors.first() {
            return Err(SkeletonError::SingularBlock(b.clone()));
        }
        Ok(())
    }

    pub fn admissible(&self, k: &FKey) -> bool {
        let [a, b, c, d, e, f] = *k;
        let n = self.len();
        k.iter().all(|&x| x < n)
            && self.composable(a, b)
            && self.composable(b, c)
            && self.n(a, b, e) > 0
            && self.n(e, c, d) > 0
            && self.n(b, c, f) > 0
            && self.n(a, f, d) > 0
    }

    pub fn key_name(&self, k: &FKey) -> String {
        format!("({})", self.names(k).join(","))
    }

    pub fn block(&self, a: usize, b: usize, c: usize, d: usize) -> Option<&FBlock> {
        self.blocks.get(&[a, b, c, d])
    }

    /// `[F^{abc}_d]_{e,f}`, zero when not admissible.
    pub fn f(&self, a: usize, b: usize, c: usize, d: usize, e: usize, f: usize) -> Scalar {
        self.block(a, b, c, d).map_or(ZERO, |blk| blk.entry(e, f))
    }

    /// `[(F^{abc}_d)^{-1}]_{f,e}`.
    pub fn finv(&self, a: usize, b: usize, c: usize, d: usize, f: usize, e: usize) -> Scalar {
        self.block(a, b, c, d).map_or(ZERO, |blk| blk.inv_entry(f, e))
    }

    fn find_dual(&self, x: usize) -> Result<usize, SkeletonError> {
        let (i, j) = self.cells[x];
        let (ui, uj) = match (self.units.get(i).copied().flatten(), self.units.get(j).copied().flatten()) {
            (Some(ui), Some(uj)) => (ui, uj),
            _ => return Err(SkeletonError::NoDual(self.labels[x].clone())),
        };
        let candidates: Vec<usize> = (0..self.len())
            .filter(|&y| self.cells[y] == (j, i) && self.n(x, y, ui) == 1 && self.n(y, x, uj) == 1)
            .collect();
        match candidates.len() {
            0 => Err(SkeletonError::NoDual(self.labels[x].clone())),
            1 => Ok(candidates[0]),
            _ => Err(SkeletonError::AmbiguousDual(self.labels[x].clone())),
        }
    }

    /// Dual label; right and left duals coincide as labels in the skeleton.
    pub fn dual(&self, x: usize) -> Result<usize, SkeletonError> {
        match self.duals[x] {
            Some(d) => Ok(d),
            None => self.find_dual(x),
        }
    }

    /// Dual label where existence was already validated.
    pub fn star(&self, x: usize) -> usize {
        self.duals[x].unwrap_or_else(|| panic!("label `{}` has no dual", self.labels[x]))
    }

    pub fn all_duals(&self) -> Result<(), SkeletonError> {
        (0..self.len()).try_for_each(|x| self.dual(x).map(|_| ()))
    }

    /// Right evaluation scalar for `ev_x : x*⊗x → 1` when `coev_x = 1`.
    pub fn ev_scalar(&self, x: usize) -> Scalar {
        let (i, j) = self.cells[x];
        let xs = self.star(x);
        ONE / self.f(x, xs, x, x, self.unit(i), self.unit(j))
    }

    /// Left evaluation scalar for `ẽv_x : x⊗x* → 1` when `c̃oev_x = 1`.
    pub fn lev_scalar(&self, x: usize) -> Scalar {
        let (i, j) = self.cells[x];
        let xs = self.star(x);
        ONE / self.finv(x, xs, x, x, self.unit(j), self.unit(i))
    }

    /// Label sequences that are composable chains, grouped by the object path they traverse.
    pub fn chains(&self, len: usize) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = (0..self.len()).map(|x| vec![x]).collect();
        for _ in 1..len {
            let mut next = Vec::new();
            for chain in &out {
                let last = *chain.last().unwrap();
                for y in 0..self.len() {
                    if self.composable(last, y) {
                        let mut c = chain.clone();
                        c.push(y);
                        next.push(c);
                    }
                }
            }
            out = next;
        }
        out
    }

    /// Object path `(o_0, ..., o_len)` traversed by a chain.
    pub fn path(&self, chain: &[usize]) -> Vec<usize> {
        let mut p = vec![self.cells[chain[0]].0];
        p.extend(chain.iter().map(|&x| self.cells[x].1));
        p
    }

    /// Checks the pentagon on every admissible instance of the given chains of length four,
    /// accumulating into per-family accumulators keyed by `family(path)`.
    pub fn pentagon_into(
        &self,
        chains: &[Vec<usize>],
        family: &dyn Fn(&[usize]) -> String,
        accs: &mut BTreeMap<String, FamilyAcc>,
        tol: Tolerance,
    ) {
        for chain in chains {
            let (a, b, c, d) = (chain[0], chain[1], chain[2], chain[3]);
            let fam = family(&self.path(chain));
            let acc = accs.entry(fam.clone()).or_insert_with(|| FamilyAcc::new(&fam));
            for &f in self.prod(a, b) {
                for &g in self.prod(f, c) {
                    for &e in self.prod(g, d) {
                        for &l in self.prod(c, d) {
                            for &k in self.prod(b, l) {
                                if self.n(a, k, e) == 0 {
                                    continue;
                                }
                                let lhs = self.f(f, c, d, e, g, l) * self.f(a, b, l, e, f, k);
                                let mut rhs = ZERO;
                                for &h in self.prod(b, c) {
                                    rhs += self.f(a, b, c, g, f, h) * self.f(a, h, d, e, g, k) * self.f(b, c, d, k, h, l);
                                }
                                acc.compare(|| self.names(&[a, b, c, d, e, f, g, k, l]), lhs, rhs, tol);
                            }
                        }
                    }
                }
            }
        }
    }

    /// Multiplicity-level shadow of the pentagon: associativity of the fusion rules.
    pub fn associativity_into(
        &self,
        chains: &[Vec<usize>],
        family: &dyn Fn(&[usize]) -> String,
        accs: &mut BTreeMap<String, FamilyAcc>,
    ) {
        for chain in chains {
            let (a, b, c) = (chain[0], chain[1], chain[2]);
            let fam = family(&self.path(chain));
            let acc = accs.entry(fam.clone()).or_insert_with(|| FamilyAcc::new(&fam));
            let cell = (self.cells[a].0, self.cells[c].1);
            for d in self.cell_labels(cell) {
                let lhs: u32 = self.prod(a, b).iter().map(|&e| self.n(a, b, e) * self.n(e, c, d)).sum();
                let rhs: u32 = self.prod(b, c).iter().map(|&f| self.n(b, c, f) * self.n(a, f, d)).sum();
                acc.compare_int(|| self.names(&[a, b, c, d]), lhs as i64, rhs as i64);
            }
        }
    }
}
