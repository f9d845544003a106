use super::lift::{module_is_zero, ImageBasis, ZeroCertificate};
use super::matrix::PolyMatrix;
use super::syzygy::syzygies;
use crate::error::{Error, Result};
use crate::polyring::{Polynomial, Ring};

/// The cokernel of a relation matrix: `rank` generators, one relation per
/// column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModulePresentation {
    rank: usize,
    relations: PolyMatrix,
    labels: Option<Vec<String>>,
}

/// Result of [`ModulePresentation::minimize`].
#[derive(Clone, Debug)]
pub struct Minimized {
    pub presentation: ModulePresentation,
    /// Old generator index of each surviving generator.
    pub kept: Vec<usize>,
    /// Expresses each old generator in the new ones (`new rank × old rank`).
    pub projection: PolyMatrix,
}

impl ModulePresentation {
    pub fn new(rank: usize, relations: PolyMatrix) -> Result<ModulePresentation> {
        if relations.rows() != rank {
            return Err(Error::Shape(format!("relation matrix has {} rows for rank {rank}", relations.rows())));
        }
        Ok(ModulePresentation { rank, relations, labels: None })
    }

    pub fn free(ring: &Ring, rank: usize) -> ModulePresentation {
        ModulePresentation { rank, relations: PolyMatrix::zeros(ring, rank, 0), labels: None }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<ModulePresentation> {
        if labels.len() != self.rank {
            return Err(Error::Shape("one label per generator".into()));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn ring(&self) -> &Ring {
        self.relations.ring()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn relations(&self) -> &PolyMatrix {
        &self.relations
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn is_zero(&self) -> Result<ZeroCertificate> {
        module_is_zero(self)
    }

    /// Rank over the fraction field.
    pub fn generic_rank(&self) -> usize {
        self.rank - self.relations.generic_rank()
    }

    /// Eliminates generators using relations with a unit entry.
    pub fn minimize(&self) -> Minimized {
        let ring = self.ring().clone();
        let mut rel: Vec<Vec<Polynomial>> = (0..self.rank).map(|i| self.relations.row(i)).collect();
        let mut ncols = self.relations.cols();
        let mut proj: Vec<Vec<Polynomial>> = (0..self.rank)
            .map(|i| (0..self.rank).map(|k| if i == k { ring.one() } else { ring.zero() }).collect())
            .collect();
        let mut kept: Vec<usize> = (0..self.rank).collect();
        loop {
            let pivot = (0..ncols).find_map(|j| (0..rel.len()).find(|&i| rel[i][j].is_unit()).map(|i| (i, j)));
            let Some((i, j)) = pivot else { break };
            let uinv = rel[i][j].constant_term().inv().expect("unit");
            let uinv = ring.constant(uinv);
            let col_j: Vec<Polynomial> = rel.iter().map(|row| row[j].clone()).collect();
            // clear row i from the other relations
            for l in 0..ncols {
                if l == j || rel[i][l].is_zero() {
                    continue;
                }
                let f = &rel[i][l] * &uinv;
                for (k, row) in rel.iter_mut().enumerate() {
                    if !col_j[k].is_zero() {
                        row[l] = &row[l] - &(&f * &col_j[k]);
                    }
                }
            }
            // e_i = -u^{-1} Σ_{k≠i} r_k e_k
            let row_i = proj[i].clone();
            for (k, prow) in proj.iter_mut().enumerate() {
                if k == i || col_j[k].is_zero() {
                    continue;
                }
                let f = -&(&col_j[k] * &uinv);
                for (c, a) in row_i.iter().enumerate() {
                    if !a.is_zero() {
                        prow[c] = &prow[c] + &(&f * a);
                    }
                }
            }
            rel.remove(i);
            proj.remove(i);
            kept.remove(i);
            for row in rel.iter_mut() {
                row.remove(j);
            }
            ncols -= 1;
        }
        let n = kept.len();
        let relations = if n == 0 {
            PolyMatrix::zeros(&ring, 0, 0)
        } else {
            PolyMatrix::from_rows(&ring, rel).expect("rectangular")
        };
        let labels = self.labels.as_ref().map(|l| kept.iter().map(|&k| l[k].clone()).collect());
        let projection = if n == 0 {
            PolyMatrix::zeros(&ring, 0, self.rank)
        } else {
            PolyMatrix::from_rows(&ring, proj).expect("rectangular")
        };
        Minimized {
            presentation: ModulePresentation { rank: n, relations: relations.nonzero_columns().normalize_columns(), labels },
            kept,
            projection,
        }
    }
}

/// Presents `span(kerGens) / span(imGens)` on the columns of `kerGens`.
pub fn present_subquotient(ker_gens: &PolyMatrix, im_gens: &PolyMatrix) -> Result<ModulePresentation> {
    if ker_gens.rows() != im_gens.rows() {
        return Err(Error::Shape(format!(
            "generators live in rank {} and {}",
            ker_gens.rows(),
            im_gens.rows()
        )));
    }
    let image = ImageBasis::new(ker_gens)?;
    let lifts = image.lift_matrix(im_gens)?;
    let syz = syzygies(ker_gens)?;
    let rel = lifts.hstack(&syz).nonzero_columns().normalize_columns();
    ModulePresentation::new(ker_gens.cols(), rel)
}
