//! Finitely presented strict 2-categories: generators, paths and formal 2-cell expressions.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// A composable sequence of generator 1-cells, written in `⊠` order:
/// `gens[0]` is applied last, so its target is the path's target.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path {
    pub src: usize,
    pub tgt: usize,
    pub gens: Vec<usize>,
}

impl Path {
    /// The unit path `1_a`.
    pub fn empty(a: usize) -> Self {
        Path { src: a, tgt: a, gens: Vec::new() }
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    /// `self ⊠ other`; requires `self.src == other.tgt`.
    pub fn concat(&self, other: &Path) -> Result<Path> {
        if self.src != other.tgt {
            return Err(Error::IllTypedPath(format!(
                "cannot compose a path starting at 0-cell {} after one ending at {}",
                self.src + 1,
                other.tgt + 1
            )));
        }
        let mut gens = self.gens.clone();
        gens.extend_from_slice(&other.gens);
        Ok(Path { src: other.src, tgt: self.tgt, gens })
    }

    /// Split off the leftmost generator: `self = first ⊠ rest`.
    pub fn split_first(&self, c: &PresentedTwoCat) -> Option<(Path, Path)> {
        let (&x, rest) = self.gens.split_first()?;
        let g = &c.gen_one_cells[x];
        Some((Path { src: g.src, tgt: g.tgt, gens: alloc::vec![x] }, Path { src: self.src, tgt: g.src, gens: rest.to_vec() }))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OneCellGen {
    pub label: String,
    pub src: usize,
    pub tgt: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoCellGen {
    pub label: String,
    pub source: Path,
    pub target: Path,
}

/// Formal 2-cell expressions over the generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Gen(usize),
    Id(Path),
    /// `Comp(g, f) = g · f`: `f` first.
    Comp(Box<Expr>, Box<Expr>),
    /// `Tensor(g, f) = g ⊠ f`.
    Tensor(Box<Expr>, Box<Expr>),
    Dagger(Box<Expr>),
}

impl Expr {
    pub fn comp(g: Expr, f: Expr) -> Expr {
        Expr::Comp(Box::new(g), Box::new(f))
    }

    pub fn tensor(g: Expr, f: Expr) -> Expr {
        Expr::Tensor(Box::new(g), Box::new(f))
    }

    pub fn dagger(e: Expr) -> Expr {
        Expr::Dagger(Box::new(e))
    }

    /// Source and target paths, or an error if the expression is ill-typed.
    pub fn boundary(&self, c: &PresentedTwoCat) -> Result<(Path, Path)> {
        match self {
            Expr::Gen(f) => {
                let g = c
                    .gen_two_cells
                    .get(*f)
                    .ok_or_else(|| Error::InvalidPresentation(format!("unknown 2-cell generator {}", f + 1)))?;
                Ok((g.source.clone(), g.target.clone()))
            }
            Expr::Id(p) => {
                c.check_path(p)?;
                Ok((p.clone(), p.clone()))
            }
            Expr::Comp(g, f) => {
                let (fs, ft) = f.boundary(c)?;
                let (gs, gt) = g.boundary(c)?;
                if ft != gs {
                    return Err(Error::IllTypedPath("vertical composite of non-matching 2-cells".into()));
                }
                Ok((fs, gt))
            }
            Expr::Tensor(g, f) => {
                let (fs, ft) = f.boundary(c)?;
                let (gs, gt) = g.boundary(c)?;
                Ok((gs.concat(&fs)?, gt.concat(&ft)?))
            }
            Expr::Dagger(e) => {
                let (s, t) = e.boundary(c)?;
                Ok((t, s))
            }
        }
    }
}

/// A free strict 2-category on finitely many generators, with optional relations
/// that are checked on images rather than used for rewriting.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PresentedTwoCat {
    pub zero_cells: Vec<String>,
    pub gen_one_cells: Vec<OneCellGen>,
    pub gen_two_cells: Vec<TwoCellGen>,
    pub relations: Vec<(Expr, Expr)>,
}

impl PresentedTwoCat {
    /// Validate all generators, paths and relations.
    pub fn validate(&self) -> Result<()> {
        if self.zero_cells.is_empty() {
            return Err(Error::InvalidPresentation("no 0-cells".into()));
        }
        let n = self.zero_cells.len();
        for g in &self.gen_one_cells {
            if g.src >= n || g.tgt >= n {
                return Err(Error::InvalidPresentation(format!("1-cell {} has endpoints outside the 0-cells", g.label)));
            }
        }
        for g in &self.gen_two_cells {
            self.check_path(&g.source)?;
            self.check_path(&g.target)?;
            if g.source.src != g.target.src || g.source.tgt != g.target.tgt {
                return Err(Error::InvalidPresentation(format!("2-cell {} between non-parallel paths", g.label)));
            }
        }
        for (k, (l, r)) in self.relations.iter().enumerate() {
            if l.boundary(self)? != r.boundary(self)? {
                return Err(Error::InvalidPresentation(format!("relation {} relates non-parallel 2-cells", k + 1)));
            }
        }
        Ok(())
    }

    pub fn check_path(&self, p: &Path) -> Result<()> {
        let n = self.zero_cells.len();
        if p.src >= n || p.tgt >= n {
            return Err(Error::IllTypedPath("path endpoints outside the 0-cells".into()));
        }
        let mut at = p.tgt;
        for &x in &p.gens {
            let g = self
                .gen_one_cells
                .get(x)
                .ok_or_else(|| Error::IllTypedPath(format!("unknown 1-cell generator {}", x + 1)))?;
            if g.tgt != at {
                return Err(Error::IllTypedPath(format!("generator {} does not end at 0-cell {}", g.label, at + 1)));
            }
            at = g.src;
        }
        if at != p.src {
            return Err(Error::IllTypedPath(format!("path ends at 0-cell {} instead of {}", at + 1, p.src + 1)));
        }
        Ok(())
    }

    /// The path of the given generators, leftmost first; must be nonempty.
    pub fn path(&self, gens: &[usize]) -> Result<Path> {
        let first = gens.first().ok_or_else(|| Error::IllTypedPath("use Path::empty for unit paths".into()))?;
        let last = gens.last().expect("nonempty");
        let (tgt, src) = match (self.gen_one_cells.get(*first), self.gen_one_cells.get(*last)) {
            (Some(f), Some(l)) => (f.tgt, l.src),
            _ => return Err(Error::IllTypedPath("unknown generator".into())),
        };
        let p = Path { src, tgt, gens: gens.to_vec() };
        self.check_path(&p)?;
        Ok(p)
    }

    pub fn generator_path(&self, x: usize) -> Path {
        let g = &self.gen_one_cells[x];
        Path { src: g.src, tgt: g.tgt, gens: alloc::vec![x] }
    }

    /// Generator pairs `(X, Y)` with `X ⊠ Y` defined.
    pub fn composable_pairs(&self) -> Vec<(usize, usize)> {
        let g = &self.gen_one_cells;
        let mut out = Vec::new();
        for x in 0..g.len() {
            for y in 0..g.len() {
                if g[x].src == g[y].tgt {
                    out.push((x, y));
                }
            }
        }
        out
    }

    pub fn composable_triples(&self) -> Vec<(usize, usize, usize)> {
        let g = &self.gen_one_cells;
        let mut out = Vec::new();
        for (x, y) in self.composable_pairs() {
            for z in 0..g.len() {
                if g[y].src == g[z].tgt {
                    out.push((x, y, z));
                }
            }
        }
        out
    }

    /// Human-readable name of a path, e.g. `X⊠Y` or `1_a`.
    pub fn path_label(&self, p: &Path) -> String {
        if p.is_empty() {
            return format!("1_{}", self.zero_cells[p.src]);
        }
        let mut s = String::new();
        for (k, &x) in p.gens.iter().enumerate() {
            if k > 0 {
                s.push('⊠');
            }
            s.push_str(&self.gen_one_cells[x].label);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn two_cells() -> PresentedTwoCat {
        PresentedTwoCat {
            zero_cells: vec!["a".into(), "b".into()],
            gen_one_cells: vec![
                OneCellGen { label: "X".into(), src: 0, tgt: 1 },
                OneCellGen { label: "Y".into(), src: 1, tgt: 0 },
            ],
            gen_two_cells: Vec::new(),
            relations: Vec::new(),
        }
    }

    #[test]
    fn paths_compose_right_to_left() {
        let c = two_cells();
        let xy = c.path(&[0, 1]).unwrap();
        assert_eq!((xy.src, xy.tgt), (1, 1));
        assert!(c.path(&[0, 0]).is_err());
        let x = c.generator_path(0);
        let y = c.generator_path(1);
        assert_eq!(x.concat(&y).unwrap(), xy);
        assert!(x.concat(&x).is_err());
        assert_eq!(c.path_label(&xy), "X⊠Y");
        assert_eq!(c.path_label(&Path::empty(0)), "1_a".to_string());
        let (first, rest) = xy.split_first(&c).unwrap();
        assert_eq!(first, x);
        assert_eq!(rest, y);
    }

    #[test]
    fn pairs_and_triples() {
        let c = two_cells();
        assert_eq!(c.composable_pairs(), vec![(0, 1), (1, 0)]);
        assert_eq!(c.composable_triples().len(), 2);
    }

    #[test]
    fn relation_typing() {
        let mut c = two_cells();
        let x = c.generator_path(0);
        c.gen_two_cells.push(TwoCellGen { label: "f".into(), source: x.clone(), target: x.clone() });
        c.relations.push((Expr::comp(Expr::Gen(0), Expr::Gen(0)), Expr::Id(x.clone())));
        assert!(c.validate().is_ok());
        c.relations.push((Expr::Gen(0), Expr::Id(c.generator_path(1))));
        assert!(c.validate().is_err());
        let t = Expr::tensor(Expr::Id(c.generator_path(1)), Expr::Gen(0));
        assert_eq!(t.boundary(&c).unwrap().0, c.path(&[1, 0]).unwrap());
    }
}
