use std::sync::Arc;

use super::{
  coeff::GAbelianGroup,
  fixed::{dt_fixed, FixedComplex},
};
use crate::{
  equivariance::SubgroupLattice,
  error::{invalid, Error, Result},
  homology::{FpMatrix, SparseMatrix},
  sset::{quotient, SimplicialMap},
};

/// Exactness of `M(X)^H -> M(Y)^H -> M(Y/X)^H` and of its long exact homology sequence.
#[derive(Clone, Debug)]
pub struct LesReport {
  pub subgroup: usize,
  pub degrees: usize,
  /// `(spot, degree, exact)` with spot one of `A`, `B`, `C`.
  pub spots: Vec<(char, usize, bool)>,
  pub counterexample: Option<String>,
}

impl LesReport {
  pub fn passed(&self) -> bool {
    self.counterexample.is_none() && self.spots.iter().all(|s| s.2)
  }
}

struct FpComplex {
  p: u64,
  dims: Vec<usize>,
  d: Vec<FpMatrix>,
}

impl FpComplex {
  fn new(c: &FixedComplex, p: u64) -> Self {
    Self {
      p,
      dims: (0..=c.dim()).map(|k| c.gens(k)).collect(),
      d: c.moore.lifts.iter().map(|m| FpMatrix::from_sparse(m, p)).collect(),
    }
  }

  fn dim(&self, n: usize) -> usize {
    self.dims.get(n).copied().unwrap_or(0)
  }

  /// `d_n: C_n -> C_{n-1}`, zero outside the stored range.
  fn boundary(&self, n: usize) -> FpMatrix {
    match self.d.get(n) {
      Some(m) if n > 0 => m.clone(),
      _ => FpMatrix::zero(self.p, if n == 0 { 0 } else { self.dim(n - 1) }, self.dim(n)),
    }
  }

  fn cycles(&self, n: usize) -> FpMatrix {
    self.boundary(n).kernel()
  }
}

fn fp_map(m: &[SparseMatrix], n: usize, p: u64, rows: usize, cols: usize) -> FpMatrix {
  m.get(n).map_or_else(|| FpMatrix::zero(p, rows, cols), |x| FpMatrix::from_sparse(x, p))
}

/// `dim { z in span(basis) : map z in im(bd) } - dim(boundaries)`, the kernel in homology.
fn kernel_in_homology(map_of_basis: &FpMatrix, bd: &FpMatrix, boundaries: usize) -> usize {
  map_of_basis.hcat(bd).nullity() - bd.nullity() - boundaries
}

fn image_in_homology(map_of_basis: &FpMatrix, bd: &FpMatrix) -> usize {
  map_of_basis.hcat(bd).rank() - bd.rank()
}

/// Checks both exactness statements for the cofibre sequence of an injective `i: X -> Y`,
/// for every conjugacy class of subgroups, through homological degree `top`.
///
/// Coefficients must be an `F_p`-vector space with G-action.
pub fn verify_cofiber_les(
  coeff: &Arc<GAbelianGroup>,
  i: &SimplicialMap,
  lattice: &Arc<SubgroupLattice>,
  top: usize,
) -> Result<Vec<LesReport>> {
  let Some(p) = coeff.prime_exponent() else {
    return Err(Error::Unsupported("long exact sequence check needs F_p coefficients".into()));
  };
  i.check_injective()?;
  let (x, y) = (&i.source, &i.target);
  for s in [x, y] {
    if s.is_truncated() && top + 1 > s.truncation() {
      return invalid("complex is truncated below the requested degrees");
    }
  }
  let keep: Vec<Vec<bool>> = (0..=y.dim()).map(|d| vec![false; y.num_cells(d)]).collect();
  let mut collapse = keep;
  for c in x.all_cells() {
    let s = i.cell_image(c);
    collapse[s.cell.dim][s.cell.idx] = true;
  }
  let (yx, q) = quotient(y, &collapse)?;
  let mut out = Vec::new();
  for class in 0..lattice.num_classes() {
    let h = lattice.class_rep(class);
    let (fa, fb, fc) = (
      dt_fixed(coeff, x, lattice, h)?,
      dt_fixed(coeff, y, lattice, h)?,
      dt_fixed(coeff, &yx, lattice, h)?,
    );
    let (a, b, c) = (FpComplex::new(&fa, p), FpComplex::new(&fb, p), FpComplex::new(&fc, p));
    let (fl, gl) = (fa.map_to(i, &fb)?, fb.map_to(&q, &fc)?);
    let f = |n: usize| fp_map(&fl, n, p, b.dim(n), a.dim(n));
    let g = |n: usize| fp_map(&gl, n, p, c.dim(n), b.dim(n));
    let mut report =
      LesReport { subgroup: h, degrees: top + 1, spots: Vec::new(), counterexample: None };
    for n in 0..=top + 1 {
      let (fn_, gn) = (f(n), g(n));
      if !gn.mul(&fn_).is_zero()
        || fn_.rank() != a.dim(n)
        || gn.rank() != c.dim(n)
        || b.dim(n) != a.dim(n) + c.dim(n)
      {
        report.counterexample = Some(format!("not degreewise short exact in degree {n}"));
        break;
      }
      if n > 0
        && (b.boundary(n).mul(&fn_) != f(n - 1).mul(&a.boundary(n))
          || c.boundary(n).mul(&gn) != g(n - 1).mul(&b.boundary(n)))
      {
        report.counterexample = Some(format!("induced maps are not chain maps in degree {n}"));
        break;
      }
    }
    if report.counterexample.is_some() {
      out.push(report);
      continue;
    }
    // delta_n: H_n(C) -> H_{n-1}(A) on a basis of cycles.
    let delta = |n: usize| -> Result<FpMatrix> {
      let zc = c.cycles(n);
      let rows = if n == 0 { 0 } else { a.dim(n - 1) };
      let mut cols = Vec::new();
      for z in zc.columns() {
        let lift = g(n).solve(&z).ok_or_else(|| Error::CheckFailed("cycle has no lift".into()))?;
        if n == 0 {
          cols.push(Vec::new());
          continue;
        }
        let bd = b.boundary(n).apply(&lift);
        let pre = f(n - 1)
          .solve(&bd)
          .ok_or_else(|| Error::CheckFailed("boundary of a lift leaves A".into()))?;
        cols.push(pre);
      }
      Ok(FpMatrix::from_columns(p, rows, &cols))
    };
    for n in 0..=top {
      let (za, zb) = (a.cycles(n), b.cycles(n));
      let (ba, bb, bc) = (a.boundary(n + 1), b.boundary(n + 1), c.boundary(n + 1));
      let (ra, rb, rc) = (ba.rank(), bb.rank(), bc.rank());
      let im_f = image_in_homology(&f(n).mul(&za), &bb);
      let ker_g = kernel_in_homology(&g(n).mul(&zb), &bc, rb);
      report.spots.push(('B', n, im_f == ker_g));
      let im_g = image_in_homology(&g(n).mul(&zb), &bc);
      let ker_delta = if n == 0 {
        c.cycles(0).cols - rc
      } else {
        kernel_in_homology(&delta(n)?, &a.boundary(n), rc)
      };
      report.spots.push(('C', n, im_g == ker_delta));
      let im_delta = image_in_homology(&delta(n + 1)?, &ba);
      let ker_f = kernel_in_homology(&f(n).mul(&za), &bb, ra);
      report.spots.push(('A', n, im_delta == ker_f));
    }
    out.push(report);
  }
  Ok(out)
}
