//! Positive segment lengths with prescribed cylinder circumferences.
//!
//! The lengths form the polytope `{x ≥ 0 : A x = w}` where `A[f][e]` counts
//! the segments of edge `e` on cylinder `f`. Its vertices are the basic
//! feasible solutions; their barycenter lies in the relative interior, so a
//! strictly positive solution exists iff the barycenter is strictly positive.

use num_traits::{Signed, Zero};

use crate::exact::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct LengthPolytope {
    pub vertices: Vec<Vec<Rational>>,
    pub center: Vec<Rational>,
}

impl LengthPolytope {
    /// The barycenter followed by points pulled toward each vertex, all in
    /// the relative interior.
    pub fn samples(&self) -> impl Iterator<Item = Vec<Rational>> + '_ {
        let three = Rational::from_integer(3);
        let four = Rational::from_integer(4);
        std::iter::once(self.center.clone()).chain(
            self.vertices
                .iter()
                .map(move |v| self.center.iter().zip(v).map(|(c, x)| (c * three + x) / four).collect()),
        )
    }
}

/// Rank of a matrix, by elimination on a copy.
#[allow(clippy::needless_range_loop)]
fn rank(mut m: Vec<Vec<Rational>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let factor = m[i][c] / m[r][c];
                for j in c..cols {
                    let delta = factor * m[r][j];
                    m[i][j] -= delta;
                }
            }
        }
        r += 1;
    }
    r
}

/// Unique solution of `m x = b` when `m` has full column rank and the
/// system is consistent.
#[allow(clippy::needless_range_loop)]
fn solve(mut m: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let p = (r..rows).find(|&i| !m[i][c].is_zero())?;
        m.swap(r, p);
        b.swap(r, p);
        let pivot = m[r][c];
        for j in c..cols {
            m[r][j] /= pivot;
        }
        b[r] /= pivot;
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let factor = m[i][c];
                for j in c..cols {
                    let delta = factor * m[r][j];
                    m[i][j] -= delta;
                }
                let delta = factor * b[r];
                b[i] -= delta;
            }
        }
        r += 1;
    }
    if b[r..].iter().any(|x| !x.is_zero()) {
        return None;
    }
    Some(b[..cols].to_vec())
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// The polytope of edge lengths, when it contains a strictly positive
/// point. `incidence[f][e]` is the number of segments of edge `e` on face
/// `f`.
pub(crate) fn positive_lengths(incidence: &[Vec<u32>], circumference: &[Rational]) -> Option<LengthPolytope> {
    let a: Vec<Vec<Rational>> = incidence
        .iter()
        .map(|row| row.iter().map(|&x| Rational::from_integer(x as i128)).collect())
        .collect();
    let edges = a.first().map_or(0, Vec::len);
    let r = rank(a.clone());
    let mut vertices: Vec<Vec<Rational>> = Vec::new();
    for basis in subsets(edges, r) {
        let sub: Vec<Vec<Rational>> = a.iter().map(|row| basis.iter().map(|&j| row[j]).collect()).collect();
        let Some(x_b) = solve(sub, circumference.to_vec()) else {
            continue;
        };
        if x_b.iter().any(Signed::is_negative) {
            continue;
        }
        let mut x = vec![Rational::zero(); edges];
        for (&j, v) in basis.iter().zip(x_b) {
            x[j] = v;
        }
        if !vertices.contains(&x) {
            vertices.push(x);
        }
    }
    if vertices.is_empty() {
        return None;
    }
    let count = Rational::from_integer(vertices.len() as i128);
    let center: Vec<Rational> = (0..edges)
        .map(|e| vertices.iter().map(|v| v[e]).sum::<Rational>() / count)
        .collect();
    if center.iter().all(Signed::is_positive) {
        Some(LengthPolytope { vertices, center })
    } else {
        None
    }
}

/// Edge incidence of a gluing: edges are numbered by their smaller dart.
pub(crate) fn incidence(faces: &[Vec<usize>], partner: &[usize]) -> (Vec<Vec<u32>>, Vec<usize>) {
    let mut edge_of = vec![usize::MAX; partner.len()];
    let mut count = 0;
    for d in 0..partner.len() {
        if d < partner[d] {
            edge_of[d] = count;
            edge_of[partner[d]] = count;
            count += 1;
        }
    }
    let rows = faces
        .iter()
        .map(|face| {
            let mut row = vec![0u32; count];
            for &d in face {
                row[edge_of[d]] += 1;
            }
            row
        })
        .collect();
    (rows, edge_of)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i128, d: i128) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn single_cylinder_halves() {
        let p = positive_lengths(&[vec![2]], &[q(3, 4)]).unwrap();
        assert_eq!(p.center, vec![q(3, 8)]);
    }

    #[test]
    fn hemispheres_need_equal_circumference() {
        assert!(positive_lengths(&[vec![1], vec![1]], &[q(1, 1), q(1, 1)]).is_some());
        assert!(positive_lengths(&[vec![1], vec![1]], &[q(1, 1), q(1, 2)]).is_none());
    }

    #[test]
    fn degenerate_polytope_is_rejected() {
        // faces: {e0,e1} and {e0}; w = (1,1) forces e1 = 0
        assert!(positive_lengths(&[vec![1, 1], vec![1, 0]], &[q(1, 1), q(1, 1)]).is_none());
        let p = positive_lengths(&[vec![1, 1], vec![1, 0]], &[q(2, 1), q(1, 1)]).unwrap();
        assert_eq!(p.center, vec![q(1, 1), q(1, 1)]);
    }

    #[test]
    fn interior_of_a_segment() {
        // one face containing both edges twice: x + y = 1/2
        let p = positive_lengths(&[vec![2, 2]], &[q(1, 1)]).unwrap();
        assert_eq!(p.vertices.len(), 2);
        assert_eq!(p.center, vec![q(1, 4), q(1, 4)]);
        assert!(p.samples().all(|x| x.iter().all(Signed::is_positive)));
    }
}
