//! Evaluation of string diagrams built from whiskered 2-cells.
//!
//! A [`Diagram`] tracks the current word of 1-cells (left to right as written in
//! `⊠`) together with the matrix of everything applied so far. Each step
//! replaces a contiguous segment of the word by the target factors of a 2-cell.
//! Segments and outputs may be empty, in which case the unit 1-cell at that
//! position is inserted or dropped and the unitors are applied implicitly.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::mathilb::{hcomp1_all, id1, BlockTwoCell, GradedOneCell};
use crate::numeric::{self, C64};

#[derive(Debug, Clone)]
pub struct Diagram {
    source: GradedOneCell,
    word: Vec<GradedOneCell>,
    base: usize,
    tuples: Vec<Vec<usize>>,
    /// Columns of the accumulated matrix as sparse `(row, value)` lists.
    cols: Vec<Vec<(usize, C64)>>,
}

/// Basis of the composite of `word` as lexicographically ordered index tuples.
/// The empty word over `base` yields the unit basis `[u]`.
fn enumerate(word: &[GradedOneCell], base: usize) -> Vec<Vec<usize>> {
    let Some(first) = word.first() else {
        return (0..base).map(|u| vec![u]).collect();
    };
    let mut tuples: Vec<Vec<usize>> = (0..first.dim()).map(|p| vec![p]).collect();
    for (k, cell) in word.iter().enumerate().skip(1) {
        let mut by_row: Vec<Vec<usize>> = vec![Vec::new(); cell.tgt()];
        for q in 0..cell.dim() {
            by_row[cell.row(q)].push(q);
        }
        let prev = &word[k - 1];
        let mut next = Vec::new();
        for t in tuples {
            for &q in &by_row[prev.col(t[k - 1])] {
                let mut ext = t.clone();
                ext.push(q);
                next.push(ext);
            }
        }
        tuples = next;
    }
    tuples
}

fn composite(word: &[GradedOneCell], base: usize) -> Result<GradedOneCell> {
    if word.is_empty() {
        Ok(id1(base))
    } else {
        hcomp1_all(word)
    }
}

fn check_chain(word: &[GradedOneCell], base: usize) -> Result<()> {
    for pair in word.windows(2) {
        if pair[0].src() != pair[1].tgt() {
            return Err(Error::CellMismatch(format!(
                "word is not composable: factor with source {} next to factor with target {}",
                pair[0].src(),
                pair[1].tgt()
            )));
        }
    }
    if let Some(last) = word.last() {
        if last.src() != base {
            return Err(Error::CellMismatch(format!(
                "word ends at 0-cell {} but base is {base}",
                last.src()
            )));
        }
    }
    Ok(())
}

impl Diagram {
    /// Start from the identity on the composite of `word` (the unit on `base` if empty).
    pub fn new(word: Vec<GradedOneCell>, base: usize) -> Result<Self> {
        check_chain(&word, base)?;
        let source = composite(&word, base)?;
        let tuples = enumerate(&word, base);
        let cols = (0..tuples.len()).map(|k| vec![(k, C64::new(1.0, 0.0))]).collect();
        Ok(Diagram { source, word, base, tuples, cols })
    }

    /// Start from a nonempty word.
    pub fn on(word: &[GradedOneCell]) -> Result<Self> {
        let base = word
            .last()
            .ok_or_else(|| Error::CellMismatch("empty word needs an explicit base".into()))?
            .src();
        Diagram::new(word.to_vec(), base)
    }

    pub fn word(&self) -> &[GradedOneCell] {
        &self.word
    }

    /// Number of indices of the 0-cell sitting left of position `at`.
    fn boundary(&self, at: usize) -> usize {
        if at < self.word.len() {
            self.word[at].tgt()
        } else if at > 0 {
            self.word[at - 1].src()
        } else {
            self.base
        }
    }

    /// Replace `word[at..at + len]` by `out`, acting with `f` on that segment.
    pub fn apply(&mut self, at: usize, len: usize, f: &BlockTwoCell, out: &[GradedOneCell]) -> Result<&mut Self> {
        if at + len > self.word.len() {
            return Err(Error::CellMismatch(format!(
                "segment {at}..{} outside a word of length {}",
                at + len,
                self.word.len()
            )));
        }
        let segment = &self.word[at..at + len];
        let unit = self.boundary(at);
        let seg_cell = composite(segment, unit)?;
        if &seg_cell != f.source() {
            return Err(Error::CellMismatch(format!(
                "2-cell source (dim {}) does not match the word segment at {at} (dim {})",
                f.source().dim(),
                seg_cell.dim()
            )));
        }
        if len > 0 {
            check_chain(segment, segment.last().map_or(unit, |c| c.src()))?;
        }
        let out_cell = composite(out, f.target().src())?;
        if &out_cell != f.target() {
            return Err(Error::CellMismatch(format!(
                "2-cell target (dim {}) does not match the declared output factors (dim {})",
                f.target().dim(),
                out_cell.dim()
            )));
        }
        let seg_index: BTreeMap<Vec<usize>, usize> = if len > 0 {
            enumerate(segment, 0).into_iter().enumerate().map(|(k, t)| (t, k)).collect()
        } else {
            BTreeMap::new()
        };
        let out_tuples = if out.is_empty() { Vec::new() } else { enumerate(out, 0) };

        let mut word: Vec<GradedOneCell> = self.word[..at].to_vec();
        word.extend_from_slice(out);
        word.extend_from_slice(&self.word[at + len..]);
        check_chain(&word, self.base)?;
        let tuples = enumerate(&word, self.base);
        let index: BTreeMap<&[usize], usize> =
            tuples.iter().enumerate().map(|(k, t)| (t.as_slice(), k)).collect();
        let nz = crate::mathilb::nonzero_rows(f.mat());

        let old_empty = self.word.is_empty();
        let new_empty = word.is_empty();
        // Image of every old basis tuple as a sparse combination of new ones.
        let mut images: Vec<Vec<(usize, C64)>> = Vec::with_capacity(self.tuples.len());
        let mut scratch: Vec<usize> = Vec::new();
        for t in &self.tuples {
            let (left, right): (&[usize], &[usize]) =
                if old_empty { (&[], &[]) } else { (&t[..at], &t[at + len..]) };
            let s = if old_empty {
                t[0]
            } else if len > 0 {
                seg_index[&t[at..at + len]]
            } else if at > 0 {
                self.word[at - 1].col(t[at - 1])
            } else {
                self.word[at].row(t[at])
            };
            let mut image = Vec::new();
            for &i in &nz[s] {
                scratch.clear();
                if new_empty {
                    scratch.push(i);
                } else {
                    scratch.extend_from_slice(left);
                    if out.is_empty() {
                        let l_ok = at == 0 || self.word[at - 1].col(left[at - 1]) == i;
                        let r_ok = right.is_empty() || self.word[at + len].row(right[0]) == i;
                        if !(l_ok && r_ok) {
                            continue;
                        }
                    } else {
                        scratch.extend_from_slice(&out_tuples[i]);
                    }
                    scratch.extend_from_slice(right);
                }
                if let Some(&k) = index.get(scratch.as_slice()) {
                    image.push((k, f.mat()[(i, s)]));
                }
            }
            images.push(image);
        }
        let zero = C64::new(0.0, 0.0);
        let mut acc = vec![zero; tuples.len()];
        let mut touched: Vec<usize> = Vec::new();
        for col in &mut self.cols {
            for &(j, z) in col.iter() {
                for &(k, coef) in &images[j] {
                    if acc[k] == zero {
                        touched.push(k);
                    }
                    acc[k] += coef * z;
                }
            }
            touched.sort_unstable();
            touched.dedup();
            col.clear();
            for &k in &touched {
                if acc[k] != zero {
                    col.push((k, acc[k]));
                }
                acc[k] = zero;
            }
            touched.clear();
        }
        drop(index);
        self.word = word;
        self.tuples = tuples;
        Ok(self)
    }

    /// Apply a 2-cell whose source is the single factor at `at` and whose target is one factor.
    pub fn apply1(&mut self, at: usize, f: &BlockTwoCell) -> Result<&mut Self> {
        let out = [f.target().clone()];
        self.apply(at, 1, f, &out)
    }

    pub fn finish(self) -> Result<BlockTwoCell> {
        let target = composite(&self.word, self.base)?;
        let mut mat = numeric::zeros(self.tuples.len(), self.cols.len());
        for (c, col) in self.cols.iter().enumerate() {
            for &(r, z) in col {
                mat[(r, c)] = z;
            }
        }
        BlockTwoCell::new(self.source, target, mat)
    }
}

/// `id_L ⊠ f ⊠ id_R`, where `f` maps the composite of `seg` to the composite of `out`.
pub fn whisker(
    left: &[GradedOneCell],
    seg: &[GradedOneCell],
    f: &BlockTwoCell,
    out: &[GradedOneCell],
    right: &[GradedOneCell],
    base: usize,
) -> Result<BlockTwoCell> {
    let mut word = left.to_vec();
    word.extend_from_slice(seg);
    word.extend_from_slice(right);
    let mut d = Diagram::new(word, base)?;
    d.apply(left.len(), seg.len(), f, out)?;
    d.finish()
}
