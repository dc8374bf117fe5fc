//! Fusion-tree calculus: morphisms between bracketed words of simple labels, expressed as
//! matrices over splitting-tree bases, with associators, unitors, (co)evaluations and the
//! right and left duals of morphisms.
//!
//! A splitting tree of a word is stored as the preorder list of node charges; the first
//! entry is the total charge. F-symbols act by
//! `((a b)_e c)_d = Σ_f [F^{abc}_d]_{e,f} (a (b c)_f)_d`.

use std::collections::HashMap;

use crate::numerics::{Mat, Scalar, ONE, ZERO};
use crate::skeleton::Skeleton;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Word {
    Unit(usize),
    Leaf(usize),
    Pair(Box<Word>, Box<Word>),
}

impl Word {
    pub fn leaf(x: usize) -> Word {
        Word::Leaf(x)
    }

    pub fn pair(a: Word, b: Word) -> Word {
        Word::Pair(Box::new(a), Box::new(b))
    }

    pub fn leaves(xs: &[usize]) -> Word {
        xs[1..].iter().fold(Word::Leaf(xs[0]), |acc, &x| Word::pair(acc, Word::Leaf(x)))
    }

    fn nodes(&self) -> usize {
        match self {
            Word::Pair(a, b) => 1 + a.nodes() + b.nodes(),
            _ => 1,
        }
    }
}

pub type Tree = Vec<usize>;

#[derive(Debug, Clone)]
pub struct Mor {
    pub dom: Word,
    pub cod: Word,
    pub dom_basis: Vec<Tree>,
    pub cod_basis: Vec<Tree>,
    pub mat: Mat,
}

impl Mor {
    /// Coefficient of `cod_tree` in the image of `dom_tree`.
    pub fn coeff(&self, cod_tree: &[usize], dom_tree: &[usize]) -> Scalar {
        let r = self.cod_basis.iter().position(|t| t == cod_tree);
        let c = self.dom_basis.iter().position(|t| t == dom_tree);
        match (r, c) {
            (Some(r), Some(c)) => self.mat.at(r, c),
            _ => ZERO,
        }
    }

    pub fn scale(&self, s: Scalar) -> Mor {
        Mor { mat: self.mat.scale(s), ..self.clone() }
    }

    pub fn max_diff(&self, other: &Mor) -> f64 {
        assert_eq!(self.dom, other.dom);
        assert_eq!(self.cod, other.cod);
        self.mat.max_abs_diff(&other.mat)
    }
}

/// Morphism builder over a structure-tier skeleton.
pub struct Calc<'a> {
    pub sk: &'a Skeleton,
}

impl<'a> Calc<'a> {
    pub fn new(sk: &'a Skeleton) -> Self {
        Calc { sk }
    }

    pub fn ends(&self, w: &Word) -> (usize, usize) {
        match w {
            Word::Unit(o) => (*o, *o),
            Word::Leaf(x) => self.sk.cells[*x],
            Word::Pair(a, b) => {
                let (s, m) = self.ends(a);
                let (m2, t) = self.ends(b);
                assert_eq!(m, m2, "word is not composable");
                (s, t)
            }
        }
    }

    pub fn basis(&self, w: &Word) -> Vec<Tree> {
        match w {
            Word::Unit(o) => vec![vec![self.sk.unit(*o)]],
            Word::Leaf(x) => vec![vec![*x]],
            Word::Pair(a, b) => {
                let (ba, bb) = (self.basis(a), self.basis(b));
                let mut out = Vec::new();
                for ta in &ba {
                    for tb in &bb {
                        for &c in self.sk.prod(ta[0], tb[0]) {
                            let mut t = Vec::with_capacity(1 + ta.len() + tb.len());
                            t.push(c);
                            t.extend_from_slice(ta);
                            t.extend_from_slice(tb);
                            out.push(t);
                        }
                    }
                }
                out
            }
        }
    }

    fn zero(&self, dom: Word, cod: Word) -> Mor {
        let dom_basis = self.basis(&dom);
        let cod_basis = self.basis(&cod);
        let mat = Mat::zeros(cod_basis.len(), dom_basis.len());
        Mor { dom, cod, dom_basis, cod_basis, mat }
    }

    /// Fills a morphism from a rule mapping each domain tree to a list of (codomain tree, coefficient).
    fn build(&self, dom: Word, cod: Word, rule: impl Fn(&[usize]) -> Vec<(Tree, Scalar)>) -> Mor {
        let mut m = self.zero(dom, cod);
        let pos: HashMap<&Tree, usize> = m.cod_basis.iter().enumerate().map(|(i, t)| (t, i)).collect();
        let mut entries = Vec::new();
        for (j, t) in m.dom_basis.iter().enumerate() {
            for (s, v) in rule(t) {
                let i = *pos.get(&s).unwrap_or_else(|| panic!("tree {s:?} missing from codomain basis"));
                entries.push((i, j, v));
            }
        }
        for (i, j, v) in entries {
            *m.mat.at_mut(i, j) += v;
        }
        m
    }

    pub fn id(&self, w: &Word) -> Mor {
        self.build(w.clone(), w.clone(), |t| vec![(t.to_vec(), ONE)])
    }

    pub fn scalar(&self, o: usize, s: Scalar) -> Mor {
        self.id(&Word::Unit(o)).scale(s)
    }

    /// `g ∘ f`.
    pub fn compose(&self, g: &Mor, f: &Mor) -> Mor {
        assert_eq!(g.dom, f.cod, "composition of non-matching morphisms");
        Mor {
            dom: f.dom.clone(),
            cod: g.cod.clone(),
            dom_basis: f.dom_basis.clone(),
            cod_basis: g.cod_basis.clone(),
            mat: g.mat.mul(&f.mat),
        }
    }

    /// Composes a pipeline applied left to right.
    pub fn chain(&self, steps: &[Mor]) -> Mor {
        let mut acc = steps[0].clone();
        for s in &steps[1..] {
            acc = self.compose(s, &acc);
        }
        acc
    }

    pub fn tensor(&self, f: &Mor, g: &Mor) -> Mor {
        let dom = Word::pair(f.dom.clone(), g.dom.clone());
        let cod = Word::pair(f.cod.clone(), g.cod.clone());
        let nf = f.dom.nodes();
        self.build(dom, cod, |t| {
            let (ta, tb) = (&t[1..1 + nf], &t[1 + nf..]);
            let ja = f.dom_basis.iter().position(|x| x.as_slice() == ta).unwrap();
            let jb = g.dom_basis.iter().position(|x| x.as_slice() == tb).unwrap();
            let mut out = Vec::new();
            for (ia, sa) in f.cod_basis.iter().enumerate() {
                let va = f.mat.at(ia, ja);
                if va == ZERO {
                    continue;
                }
                for (ib, sb) in g.cod_basis.iter().enumerate() {
                    let vb = g.mat.at(ib, jb);
                    if vb == ZERO {
                        continue;
                    }
                    let mut s = vec![t[0]];
                    s.extend_from_slice(sa);
                    s.extend_from_slice(sb);
                    out.push((s, va * vb));
                }
            }
            out
        })
    }

    /// `α : (a⊗b)⊗c → a⊗(b⊗c)`.
    pub fn assoc(&self, a: &Word, b: &Word, c: &Word) -> Mor {
        let (na, nb) = (a.nodes(), b.nodes());
        let dom = Word::pair(Word::pair(a.clone(), b.clone()), c.clone());
        let cod = Word::pair(a.clone(), Word::pair(b.clone(), c.clone()));
        self.build(dom, cod, |t| {
            let (d, e) = (t[0], t[1]);
            let ta = &t[2..2 + na];
            let tb = &t[2 + na..2 + na + nb];
            let tc = &t[2 + na + nb..];
            let blk = self.sk.block(ta[0], tb[0], tc[0], d).unwrap_or_else(|| panic!("missing F-block {:?}", (ta[0], tb[0], tc[0], d, t)));
            blk.cols
                .iter()
                .filter_map(|&f| {
                    let v = blk.entry(e, f);
                    (v != ZERO).then(|| {
                        let mut s = vec![d];
                        s.extend_from_slice(ta);
                        s.push(f);
                        s.extend_from_slice(tb);
                        s.extend_from_slice(tc);
                        (s, v)
                    })
                })
                .collect()
        })
    }

    /// `α^{-1} : a⊗(b⊗c) → (a⊗b)⊗c`.
    pub fn assoc_inv(&self, a: &Word, b: &Word, c: &Word) -> Mor {
        let (na, nb) = (a.nodes(), b.nodes());
        let dom = Word::pair(a.clone(), Word::pair(b.clone(), c.clone()));
        let cod = Word::pair(Word::pair(a.clone(), b.clone()), c.clone());
        self.build(dom, cod, |t| {
            let d = t[0];
            let ta = &t[1..1 + na];
            let f = t[1 + na];
            let tb = &t[2 + na..2 + na + nb];
            let tc = &t[2 + na + nb..];
            let blk = self.sk.block(ta[0], tb[0], tc[0], d).unwrap_or_else(|| panic!("missing F-block {:?}", (ta[0], tb[0], tc[0], d, t)));
            blk.rows
                .iter()
                .filter_map(|&e| {
                    let v = blk.inv_entry(f, e);
                    (v != ZERO).then(|| {
                        let mut s = vec![d, e];
                        s.extend_from_slice(ta);
                        s.extend_from_slice(tb);
                        s.extend_from_slice(tc);
                        (s, v)
                    })
                })
                .collect()
        })
    }

    /// `λ : 1⊗w → w`.
    pub fn lunit(&self, w: &Word) -> Mor {
        let (s, _) = self.ends(w);
        let dom = Word::pair(Word::Unit(s), w.clone());
        self.build(dom, w.clone(), |t| vec![(t[2..].to_vec(), ONE)])
    }

    pub fn lunit_inv(&self, w: &Word) -> Mor {
        let (s, _) = self.ends(w);
        let u = self.sk.unit(s);
        let cod = Word::pair(Word::Unit(s), w.clone());
        self.build(w.clone(), cod, |t| {
            let mut s = vec![t[0], u];
            s.extend_from_slice(t);
            vec![(s, ONE)]
        })
    }

    /// `ρ : w⊗1 → w`.
    pub fn runit(&self, w: &Word) -> Mor {
        let (_, e) = self.ends(w);
        let dom = Word::pair(w.clone(), Word::Unit(e));
        self.build(dom, w.clone(), |t| vec![(t[1..t.len() - 1].to_vec(), ONE)])
    }

    pub fn runit_inv(&self, w: &Word) -> Mor {
        let (_, e) = self.ends(w);
        let u = self.sk.unit(e);
        let cod = Word::pair(w.clone(), Word::Unit(e));
        self.build(w.clone(), cod, |t| {
            let mut s = vec![t[0]];
            s.extend_from_slice(t);
            s.push(u);
            vec![(s, ONE)]
        })
    }

    /// Splitting vertex `z → x⊗y`.
    pub fn split(&self, x: usize, y: usize, z: usize) -> Mor {
        let cod = Word::pair(Word::Leaf(x), Word::Leaf(y));
        self.build(Word::Leaf(z), cod, |_| vec![(vec![z, x, y], ONE)])
    }

    /// Fusion vertex `x⊗y → z`.
    pub fn fuse(&self, x: usize, y: usize, z: usize) -> Mor {
        let dom = Word::pair(Word::Leaf(x), Word::Leaf(y));
        self.build(dom, Word::Leaf(z), |t| if t[0] == z { vec![(vec![z], ONE)] } else { vec![] })
    }

    /// `coev_x : 1 → x⊗x*`, normalized to 1.
    pub fn coev(&self, x: usize) -> Mor {
        let (i, _) = self.sk.cells[x];
        let (u, xs) = (self.sk.unit(i), self.sk.star(x));
        let cod = Word::pair(Word::Leaf(x), Word::Leaf(xs));
        self.build(Word::Unit(i), cod, |_| vec![(vec![u, x, xs], ONE)])
    }

    /// `ev_x : x*⊗x → 1`.
    pub fn ev(&self, x: usize) -> Mor {
        let (_, j) = self.sk.cells[x];
        let (u, xs) = (self.sk.unit(j), self.sk.star(x));
        let eps = self.sk.ev_scalar(x);
        let dom = Word::pair(Word::Leaf(xs), Word::Leaf(x));
        self.build(dom, Word::Unit(j), |t| if t[0] == u { vec![(vec![u], eps)] } else { vec![] })
    }

    /// `ẽv_x : x⊗x* → 1`.
    pub fn lev(&self, x: usize) -> Mor {
        let (i, _) = self.sk.cells[x];
        let (u, xs) = (self.sk.unit(i), self.sk.star(x));
        let eps = self.sk.lev_scalar(x);
        let dom = Word::pair(Word::Leaf(x), Word::Leaf(xs));
        self.build(dom, Word::Unit(i), |t| if t[0] == u { vec![(vec![u], eps)] } else { vec![] })
    }

    /// `c̃oev_x : 1 → x*⊗x`, normalized to 1.
    pub fn lcoev(&self, x: usize) -> Mor {
        let (_, j) = self.sk.cells[x];
        let (u, xs) = (self.sk.unit(j), self.sk.star(x));
        let cod = Word::pair(Word::Leaf(xs), Word::Leaf(x));
        self.build(Word::Unit(j), cod, |_| vec![(vec![u, xs, x], ONE)])
    }

    pub fn inverse(&self, f: &Mor) -> Mor {
        let mat = f.mat.inverse().expect("morphism is not invertible");
        Mor {
            dom: f.cod.clone(),
            cod: f.dom.clone(),
            dom_basis: f.cod_basis.clone(),
            cod_basis: f.dom_basis.clone(),
            mat,
        }
    }

    /// Left-comb normal form without unit letters, and the coherence isomorphism into it.
    pub fn normalize(&self, w: &Word) -> (Word, Mor) {
        match w {
            Word::Unit(_) | Word::Leaf(_) => (w.clone(), self.id(w)),
            Word::Pair(a, b) => {
                let (na, fa) = self.normalize(a);
                let (nb, fb) = self.normalize(b);
                let g = self.tensor(&fa, &fb);
                let (n, h) = self.absorb(&na, &nb);
                (n, self.compose(&h, &g))
            }
        }
    }

    fn absorb(&self, l: &Word, r: &Word) -> (Word, Mor) {
        match (l, r) {
            (_, Word::Unit(_)) => (l.clone(), self.runit(l)),
            (Word::Unit(_), _) => (r.clone(), self.lunit(r)),
            (_, Word::Leaf(_)) => {
                let w = Word::pair(l.clone(), r.clone());
                (w.clone(), self.id(&w))
            }
            (_, Word::Pair(r1, y)) => {
                let a = self.assoc_inv(l, r1, y);
                let (n1, h1) = self.absorb(l, r1);
                let t = self.tensor(&h1, &self.id(y));
                (Word::pair(n1, (**y).clone()), self.compose(&t, &a))
            }
        }
    }

    /// The coherence isomorphism between two bracketings of the same letters.
    pub fn rebracket(&self, from: &Word, to: &Word) -> Mor {
        let (n1, f1) = self.normalize(from);
        let (n2, f2) = self.normalize(to);
        assert_eq!(n1, n2, "rebracket between different letter sequences");
        self.compose(&self.inverse(&f2), &f1)
    }

    pub fn dual_word(&self, w: &Word) -> Word {
        match w {
            Word::Unit(o) => Word::Unit(*o),
            Word::Leaf(x) => Word::Leaf(self.sk.star(*x)),
            Word::Pair(a, b) => Word::pair(self.dual_word(b), self.dual_word(a)),
        }
    }

    /// `coev_W : 1 → W⊗W*` built from the letters' coevaluations.
    pub fn coev_word(&self, w: &Word) -> Mor {
        match w {
            Word::Unit(_) => self.lunit_inv(w),
            Word::Leaf(x) => self.coev(*x),
            Word::Pair(a, b) => {
                let (da, db) = (self.dual_word(a), self.dual_word(b));
                let s1 = self.coev_word(a);
                let s2 = self.tensor(&self.runit_inv(a), &self.id(&da));
                let s3 = self.tensor(&self.tensor(&self.id(a), &self.coev_word(b)), &self.id(&da));
                let target = Word::pair(w.clone(), Word::pair(db, da));
                let s4 = self.rebracket(&s3.cod, &target);
                self.chain(&[s1, s2, s3, s4])
            }
        }
    }

    /// `ev_W : W*⊗W → 1`.
    pub fn ev_word(&self, w: &Word) -> Mor {
        match w {
            Word::Unit(_) => self.lunit(w),
            Word::Leaf(x) => self.ev(*x),
            Word::Pair(a, b) => {
                let (da, db) = (self.dual_word(a), self.dual_word(b));
                let dom = Word::pair(self.dual_word(w), w.clone());
                let mid = Word::pair(Word::pair(db.clone(), Word::pair(da, (**a).clone())), (**b).clone());
                let s1 = self.rebracket(&dom, &mid);
                let s2 = self.tensor(&self.tensor(&self.id(&db), &self.ev_word(a)), &self.id(b));
                let s3 = self.tensor(&self.runit(&db), &self.id(b));
                let s4 = self.ev_word(b);
                self.chain(&[s1, s2, s3, s4])
            }
        }
    }

    /// `c̃oev_W : 1 → W*⊗W`.
    pub fn lcoev_word(&self, w: &Word) -> Mor {
        match w {
            Word::Unit(_) => self.lunit_inv(w),
            Word::Leaf(x) => self.lcoev(*x),
            Word::Pair(a, b) => {
                let (da, db) = (self.dual_word(a), self.dual_word(b));
                let s1 = self.lcoev_word(b);
                let s2 = self.tensor(&self.runit_inv(&db), &self.id(b));
                let s3 = self.tensor(&self.tensor(&self.id(&db), &self.lcoev_word(a)), &self.id(b));
                let target = Word::pair(Word::pair(db, da), w.clone());
                let s4 = self.rebracket(&s3.cod, &target);
                self.chain(&[s1, s2, s3, s4])
            }
        }
    }

    /// `ẽv_W : W⊗W* → 1`.
    pub fn lev_word(&self, w: &Word) -> Mor {
        match w {
            Word::Unit(_) => self.lunit(w),
            Word::Leaf(x) => self.lev(*x),
            Word::Pair(a, b) => {
                let (da, db) = (self.dual_word(a), self.dual_word(b));
                let dom = Word::pair(w.clone(), self.dual_word(w));
                let mid = Word::pair(Word::pair((**a).clone(), Word::pair((**b).clone(), db)), da.clone());
                let s1 = self.rebracket(&dom, &mid);
                let s2 = self.tensor(&self.tensor(&self.id(a), &self.lev_word(b)), &self.id(&da));
                let s3 = self.tensor(&self.runit(a), &self.id(&da));
                let s4 = self.lev_word(a);
                self.chain(&[s1, s2, s3, s4])
            }
        }
    }

    /// Right dual `f* : Y* → X*` of `f : X → Y`.
    pub fn right_dual(&self, f: &Mor) -> Mor {
        let (x, y) = (&f.dom, &f.cod);
        let (xs, ys) = (self.dual_word(x), self.dual_word(y));
        let s1 = self.runit_inv(&ys);
        let s2 = self.tensor(&self.id(&ys), &self.coev_word(x));
        let s3 = self.tensor(&self.id(&ys), &self.tensor(f, &self.id(&xs)));
        let s4 = self.rebracket(&s3.cod, &Word::pair(Word::pair(ys.clone(), y.clone()), xs.clone()));
        let s5 = self.tensor(&self.ev_word(y), &self.id(&xs));
        let s6 = self.lunit(&xs);
        self.chain(&[s1, s2, s3, s4, s5, s6])
    }

    /// Left dual `*f : Y* → X*` of `f : X → Y`.
    pub fn left_dual(&self, f: &Mor) -> Mor {
        let (x, y) = (&f.dom, &f.cod);
        let (xs, ys) = (self.dual_word(x), self.dual_word(y));
        let s1 = self.lunit_inv(&ys);
        let s2 = self.tensor(&self.lcoev_word(x), &self.id(&ys));
        let s3 = self.tensor(&self.tensor(&self.id(&xs), f), &self.id(&ys));
        let s4 = self.rebracket(&s3.cod, &Word::pair(xs.clone(), Word::pair(y.clone(), ys.clone())));
        let s5 = self.tensor(&self.id(&xs), &self.lev_word(y));
        let s6 = self.runit(&xs);
        self.chain(&[s1, s2, s3, s4, s5, s6])
    }

    /// Right zig-zag `(id_W⊗ev_W)∘α∘(coev_W⊗id_W)` on `W`, expected to be the identity.
    pub fn right_snake(&self, w: &Word) -> Mor {
        let ws = self.dual_word(w);
        let s1 = self.lunit_inv(w);
        let s2 = self.tensor(&self.coev_word(w), &self.id(w));
        let s3 = self.assoc(w, &ws, w);
        let s4 = self.tensor(&self.id(w), &self.ev_word(w));
        let s5 = self.runit(w);
        self.chain(&[s1, s2, s3, s4, s5])
    }

    /// Second right zig-zag on `W*`: `(ev_W⊗id)∘α^{-1}∘(id⊗coev_W)`.
    pub fn right_snake_dual(&self, w: &Word) -> Mor {
        let ws = self.dual_word(w);
        let s1 = self.runit_inv(&ws);
        let s2 = self.tensor(&self.id(&ws), &self.coev_word(w));
        let s3 = self.assoc_inv(&ws, w, &ws);
        let s4 = self.tensor(&self.ev_word(w), &self.id(&ws));
        let s5 = self.lunit(&ws);
        self.chain(&[s1, s2, s3, s4, s5])
    }

    /// Left zig-zag on `W`: `(ẽv_W⊗id)∘α^{-1}∘(id⊗c̃oev_W)`.
    pub fn left_snake(&self, w: &Word) -> Mor {
        let ws = self.dual_word(w);
        let s1 = self.runit_inv(w);
        let s2 = self.tensor(&self.id(w), &self.lcoev_word(w));
        let s3 = self.assoc_inv(w, &ws, w);
        let s4 = self.tensor(&self.lev_word(w), &self.id(w));
        let s5 = self.lunit(w);
        self.chain(&[s1, s2, s3, s4, s5])
    }

    /// Second left zig-zag on `W*`: `(id⊗ẽv_W)∘α∘(c̃oev_W⊗id)`.
    pub fn left_snake_dual(&self, w: &Word) -> Mor {
        let ws = self.dual_word(w);
        let s1 = self.lunit_inv(&ws);
        let s2 = self.tensor(&self.lcoev_word(w), &self.id(&ws));
        let s3 = self.assoc(&ws, w, &ws);
        let s4 = self.tensor(&self.id(&ws), &self.lev_word(w));
        let s5 = self.runit(&ws);
        self.chain(&[s1, s2, s3, s4, s5])
    }

    /// Scalar `c` with `(v^{xy}_z)** = c · v^{xy}_z`, the tensor structure of the double dual.
    pub fn double_dual_scalar(&self, x: usize, y: usize, z: usize) -> Scalar {
        let v = self.split(x, y, z);
        let vv = self.right_dual(&self.right_dual(&v));
        vv.coeff(&[z, x, y], &[z])
    }

    /// Same for the left double dual.
    pub fn left_double_dual_scalar(&self, x: usize, y: usize, z: usize) -> Scalar {
        let v = self.split(x, y, z);
        let vv = self.left_dual(&self.left_dual(&v));
        vv.coeff(&[z, x, y], &[z])
    }
}
