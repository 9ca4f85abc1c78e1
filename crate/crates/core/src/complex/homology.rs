use std::collections::VecDeque;
use std::fmt;

use serde::Serialize;

use crate::error::ComplexError;

use super::ShapeComplex;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct H1Result {
    pub free_rank: usize,
    /// Invariant factors d1 | d2 | ..., all at least 2.
    pub torsion: Vec<u64>,
}

impl fmt::Display for H1Result {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Nonzero invariant factors of an integer matrix, in divisibility order.
pub fn smith_invariants(mut m: Vec<Vec<i128>>) -> Vec<i128> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry of the remaining block becomes the pivot
        let mut pivot = None;
        for i in t..rows {
            for j in t..cols {
                if m[i][j] != 0
                    && pivot.is_none_or(|(pi, pj): (usize, usize)| m[i][j].abs() < m[pi][pj].abs())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        let mut dirty = false;
        for i in t + 1..rows {
            let q = m[i][t] / m[t][t];
            if q != 0 {
                let (top, below) = m.split_at_mut(i);
                for (x, p) in below[0][t..].iter_mut().zip(&top[t][t..]) {
                    *x -= q * p;
                }
            }
            dirty |= m[i][t] != 0;
        }
        for j in t + 1..cols {
            let q = m[t][j] / m[t][t];
            if q != 0 {
                for row in m.iter_mut().skip(t) {
                    row[j] -= q * row[t];
                }
            }
            dirty |= m[t][j] != 0;
        }
        if dirty {
            continue;
        }
        diag.push(m[t][t].abs());
        t += 1;
    }
    // normalize to a divisibility chain
    for i in 0..diag.len() {
        for j in i + 1..diag.len() {
            let g = gcd(diag[i], diag[j]);
            let l = diag[i] / g * diag[j];
            diag[i] = g;
            diag[j] = l;
        }
    }
    diag
}

fn boundary_matrices(c: &ShapeComplex) -> (Vec<Vec<i128>>, Vec<Vec<i128>>) {
    let mut d1 = vec![vec![0i128; c.edge_count()]; c.vertex_count()];
    for (k, e) in c.edges().iter().enumerate() {
        d1[e.dst][k] += 1;
        d1[e.src][k] -= 1;
    }
    let mut d2 = vec![vec![0i128; c.face_count()]; c.edge_count()];
    for (fi, f) in c.faces().iter().enumerate() {
        for s in &f.sides {
            d2[s.edge][fi] += if s.forward { 1 } else { -1 };
        }
    }
    (d1, d2)
}

fn from_factors(free_rank: usize, factors: &[i128]) -> H1Result {
    H1Result {
        free_rank,
        torsion: factors
            .iter()
            .filter(|&&d| d > 1)
            .map(|&d| d as u64)
            .collect(),
    }
}

pub fn homology_h1(c: &ShapeComplex) -> Result<H1Result, ComplexError> {
    if !c.is_connected() {
        return Err(if c.vertex_count() == 0 {
            ComplexError::Empty
        } else {
            ComplexError::Disconnected
        });
    }
    let (d1, d2) = boundary_matrices(c);
    let r1 = smith_invariants(d1).len();
    let f2 = smith_invariants(d2);
    Ok(from_factors(c.edge_count() - r1 - f2.len(), &f2))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Presentation {
    pub generators: Vec<String>,
    /// Relator words as (generator index, ±1).
    pub relators: Vec<Vec<(usize, i32)>>,
}

impl Presentation {
    pub fn abelianization(&self) -> H1Result {
        let n = self.generators.len();
        if self.relators.is_empty() {
            return H1Result {
                free_rank: n,
                torsion: vec![],
            };
        }
        let mut m = vec![vec![0i128; n]; self.relators.len()];
        for (r, word) in self.relators.iter().enumerate() {
            for &(g, e) in word {
                m[r][g] += e as i128;
            }
        }
        let f = smith_invariants(m);
        from_factors(n - f.len(), &f)
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let words: Vec<String> = self
            .relators
            .iter()
            .map(|w| {
                if w.is_empty() {
                    return "1".to_string();
                }
                w.iter()
                    .map(|&(g, e)| {
                        if e == 1 {
                            self.generators[g].clone()
                        } else {
                            format!("{}^-1", self.generators[g])
                        }
                    })
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        write!(
            f,
            "< {} | {} >",
            self.generators.join(", "),
            words.join(", ")
        )
    }
}

/// Fundamental group presentation: generators are the edges off a breadth-first
/// spanning tree, relators are the face boundary words.
pub fn presentation(c: &ShapeComplex) -> Result<Presentation, ComplexError> {
    if !c.is_connected() {
        return Err(if c.vertex_count() == 0 {
            ComplexError::Empty
        } else {
            ComplexError::Disconnected
        });
    }
    let mut in_tree = vec![false; c.edge_count()];
    let mut seen = vec![false; c.vertex_count()];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(x) = queue.pop_front() {
        for (k, e) in c.edges().iter().enumerate() {
            let y = if e.src == x {
                e.dst
            } else if e.dst == x {
                e.src
            } else {
                continue;
            };
            if !seen[y] {
                seen[y] = true;
                in_tree[k] = true;
                queue.push_back(y);
            }
        }
    }
    let mut index = vec![usize::MAX; c.edge_count()];
    let mut generators = Vec::new();
    for (k, e) in c.edges().iter().enumerate() {
        if !in_tree[k] {
            index[k] = generators.len();
            generators.push(e.id.clone());
        }
    }
    let relators = c
        .faces()
        .iter()
        .map(|f| {
            f.sides
                .iter()
                .filter(|s| !in_tree[s.edge])
                .map(|s| (index[s.edge], if s.forward { 1 } else { -1 }))
                .collect()
        })
        .collect();
    Ok(Presentation {
        generators,
        relators,
    })
}
