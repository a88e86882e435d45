use super::matrix::{Field, Matrix, RatMatrix, Rationals};

/// Reduced row echelon form with zero rows removed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref<T> {
    pub rref: Matrix<T>,
    pub rank: usize,
    /// Strictly increasing pivot column of each row of `rref`.
    pub pivots: Vec<usize>,
}

/// Gauss-Jordan elimination over any field.
pub fn rref<F: Field>(field: &F, a: &Matrix<F::Elem>) -> Rref<F::Elem> {
    let mut m = a.clone();
    let (rows, cols) = m.shape();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !field.is_zero(m.get(i, c))) else {
            continue;
        };
        m.swap_rows(r, p);
        let inv = field.inv(m.get(r, c)).expect("pivot is nonzero");
        for j in c..cols {
            let v = field.mul(&inv, m.get(r, j));
            m.set(r, j, v);
        }
        for i in 0..rows {
            if i == r || field.is_zero(m.get(i, c)) {
                continue;
            }
            let factor = m.get(i, c).clone();
            for j in c..cols {
                if field.is_zero(m.get(r, j)) {
                    continue;
                }
                let v = field.sub(m.get(i, j), &field.mul(&factor, m.get(r, j)));
                m.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate_rows(r);
    Rref { rref: m, rank: r, pivots }
}

pub fn rank<F: Field>(field: &F, a: &Matrix<F::Elem>) -> usize {
    rref(field, a).rank
}

/// Exact RREF over the rationals.
pub fn rref_rational(a: &RatMatrix) -> Rref<crate::arith::Rational> {
    rref(&Rationals, a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::linalg::matrix::identity;

    fn rm(rows: usize, cols: usize, v: &[i64]) -> RatMatrix {
        Matrix::new(rows, cols, v.iter().map(|&x| rat(x, 1)).collect()).unwrap()
    }

    #[test]
    fn examples() {
        let r = rref_rational(&rm(2, 2, &[2, 4, 1, 2]));
        assert_eq!(r.rref, rm(1, 2, &[1, 2]));
        assert_eq!(r.rank, 1);
        assert_eq!(r.pivots, vec![0]);

        let i3 = identity(&Rationals, 3);
        let r = rref_rational(&i3);
        assert_eq!((r.rref, r.rank), (i3, 3));

        let r = rref_rational(&rm(2, 2, &[1, 1, 0, 1]));
        assert_eq!(r.rref, identity(&Rationals, 2));
    }

    #[test]
    fn zero_matrix_has_rank_zero() {
        let r = rref_rational(&rm(2, 3, &[0; 6]));
        assert_eq!(r.rank, 0);
        assert_eq!(r.rref.shape(), (0, 3));
    }

    #[test]
    fn rational_pivots() {
        let a = rm(3, 4, &[0, 2, 1, 3, 0, 4, 2, 6, 1, 0, 0, 1]);
        let r = rref_rational(&a);
        assert_eq!(r.pivots, vec![0, 1]);
        assert_eq!(r.rref.row(1), &[rat(0, 1), rat(1, 1), rat(1, 2), rat(3, 2)]);
        assert_eq!(rref_rational(&r.rref), r);
    }
}
