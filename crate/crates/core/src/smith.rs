//! Smith normal form over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Integer matrix in row-major order.
pub type IntMatrix = Vec<Vec<BigInt>>;

/// Diagonalization `U·A·V = D` of an integer matrix; `U` is not recorded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    /// Invariant factors `d₁ | d₂ | …`, non-negative, `min(rows, cols)` of them
    /// with zeros last.
    pub diagonal: Vec<BigInt>,
    /// The unimodular column transform `V` (`cols × cols`).
    pub column_transform: IntMatrix,
}

/// Invariant factors of `m`.
pub fn smith_normal_form(m: &IntMatrix) -> Vec<BigInt> {
    smith_form(m).diagonal
}

pub fn smith_form(m: &IntMatrix) -> SmithForm {
    diagonalize(m, m.first().map_or(0, Vec::len))
}

/// As [`smith_form`], with the column count given so that matrices without
/// rows still get a transform of the right size.
pub(crate) fn diagonalize(m: &IntMatrix, cols: usize) -> SmithForm {
    let rows = m.len();
    let mut a = m.clone();
    let mut v: IntMatrix = (0..cols).map(|i| (0..cols).map(|j| BigInt::from((i == j) as i32)).collect()).collect();

    for t in 0..rows.min(cols) {
        let Some((pi, pj)) = min_nonzero(&a, (t..rows).flat_map(|i| (t..cols).map(move |j| (i, j)))) else {
            break;
        };
        a.swap(t, pi);
        swap_cols(&mut a, t, pj);
        swap_cols(&mut v, t, pj);
        loop {
            let pivot = a[t][t].clone();
            for i in t + 1..rows {
                let q = a[i][t].div_floor(&pivot);
                if !q.is_zero() {
                    sub_row_multiple(&mut a, i, t, &q);
                }
            }
            for j in t + 1..cols {
                let q = a[t][j].div_floor(&pivot);
                if !q.is_zero() {
                    add_col_multiple(&mut a, j, t, &q);
                    add_col_multiple(&mut v, j, t, &q);
                }
            }
            let line = (t + 1..rows).map(|i| (i, t)).chain((t + 1..cols).map(|j| (t, j)));
            if let Some((i, j)) = min_nonzero(&a, line) {
                a.swap(t, i);
                swap_cols(&mut a, t, j);
                swap_cols(&mut v, t, j);
                continue;
            }
            // pivot row and column are clear; enforce divisibility of the rest
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a[i][j].is_multiple_of(&pivot)));
            match bad {
                Some(i) => sub_row_multiple(&mut a, t, i, &-BigInt::one()),
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = -&*x;
            }
        }
    }
    let diagonal = (0..rows.min(cols)).map(|t| a[t][t].clone()).collect();
    SmithForm { diagonal, column_transform: v }
}

fn min_nonzero(a: &IntMatrix, cells: impl Iterator<Item = (usize, usize)>) -> Option<(usize, usize)> {
    cells.filter(|&(i, j)| !a[i][j].is_zero()).min_by(|&(i, j), &(k, l)| a[i][j].abs().cmp(&a[k][l].abs()))
}

fn swap_cols(m: &mut IntMatrix, a: usize, b: usize) {
    if a != b {
        for row in m.iter_mut() {
            row.swap(a, b);
        }
    }
}

/// row `dst` -= q · row `src`
fn sub_row_multiple(m: &mut IntMatrix, dst: usize, src: usize, q: &BigInt) {
    let src_row = m[src].clone();
    for (x, y) in m[dst].iter_mut().zip(&src_row) {
        *x -= q * y;
    }
}

/// column `dst` -= q · column `src`
fn add_col_multiple(m: &mut IntMatrix, dst: usize, src: usize, q: &BigInt) {
    for row in m.iter_mut() {
        let d = q * &row[src];
        row[dst] -= d;
    }
}
