use serde::{Deserialize, Serialize};

use super::{Dist, MetricSpace};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Norm {
    #[serde(rename = "l1")]
    L1,
    #[serde(rename = "linf")]
    LInf,
}

/// Shape of an integer grid `[0..side]^dim`; points are in row-major order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GridShape {
    pub side: u32,
    pub dim: u32,
    pub norm: Norm,
}

impl GridShape {
    pub fn coords(&self, index: usize) -> Vec<i64> {
        let width = self.side as usize + 1;
        let mut rest = index;
        let mut c = vec![0; self.dim as usize];
        for slot in c.iter_mut().rev() {
            *slot = (rest % width) as i64;
            rest /= width;
        }
        c
    }
}

impl MetricSpace {
    /// A space from a full distance matrix. Labels default to `0..n`.
    pub fn from_matrix(labels: Option<Vec<String>>, rows: Vec<Vec<Dist>>) -> Result<Self> {
        let n = rows.len();
        let labels = labels.unwrap_or_else(|| (0..n).map(|i| i.to_string()).collect());
        if labels.len() != n {
            return Err(Error::BadMetric(format!("{} labels for {n} points", labels.len())));
        }
        if let Some((i, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::BadMetric(format!("row {i} has {} entries, expected {n}", row.len())));
        }
        let space = MetricSpace { labels, dist: rows.into_iter().flatten().collect(), grid: None };
        space.validate()?;
        Ok(space)
    }

    /// Shortest-path metric of a weighted undirected graph; unreachable pairs are at `∞`.
    pub fn from_graph(labels: Vec<String>, edges: &[(usize, usize, Dist)]) -> Result<Self> {
        let n = labels.len();
        let mut d = vec![Dist::Infinite; n * n];
        for i in 0..n {
            d[i * n + i] = Dist::ZERO;
        }
        for &(u, v, w) in edges {
            if u >= n || v >= n {
                return Err(Error::PointOutOfRange(u.max(v)));
            }
            if w.is_negative() {
                return Err(Error::BadMetric(format!("negative edge weight {w} on {u}-{v}")));
            }
            if u != v && w < d[u * n + v] {
                d[u * n + v] = w;
                d[v * n + u] = w;
            }
        }
        for k in 0..n {
            for i in 0..n {
                let dik = d[i * n + k];
                if !dik.is_finite() {
                    continue;
                }
                for j in 0..n {
                    let via = dik.checked_add(d[k * n + j])?;
                    if via < d[i * n + j] {
                        d[i * n + j] = via;
                    }
                }
            }
        }
        let space = MetricSpace { labels, dist: d, grid: None };
        space.validate()?;
        Ok(space)
    }

    /// The integer grid `{0..side}^dim` under ℓ¹ or ℓ^∞.
    pub fn grid(side: u32, dim: u32, norm: Norm) -> Result<Self> {
        if dim == 0 {
            return Err(Error::BadMetric("grid dimension must be positive".into()));
        }
        let shape = GridShape { side, dim, norm };
        let n = (side as usize + 1)
            .checked_pow(dim)
            .filter(|&n| n <= 1 << 14)
            .ok_or_else(|| Error::BadMetric(format!("grid [0..{side}]^{dim} is too large")))?;
        let coords: Vec<Vec<i64>> = (0..n).map(|i| shape.coords(i)).collect();
        let labels = coords
            .iter()
            .map(|c| {
                if dim == 1 {
                    c[0].to_string()
                } else {
                    let parts: Vec<String> = c.iter().map(ToString::to_string).collect();
                    format!("({})", parts.join(","))
                }
            })
            .collect();
        let mut dist = Vec::with_capacity(n * n);
        for a in &coords {
            for b in &coords {
                let diffs = a.iter().zip(b).map(|(x, y)| (x - y).abs());
                let v = match norm {
                    Norm::L1 => diffs.sum(),
                    Norm::LInf => diffs.max().unwrap_or(0),
                };
                dist.push(Dist::int(v));
            }
        }
        let space = MetricSpace { labels, dist, grid: Some(shape) };
        space.validate()?;
        Ok(space)
    }

    /// The path `0 – 1 – … – last`.
    pub fn path(last: u32) -> Result<Self> {
        Self::grid(last, 1, Norm::L1)
    }

    /// Disjoint union with all cross distances `∞`. Labels are prefixed `0:` and `1:`.
    pub fn disjoint_union(a: &MetricSpace, b: &MetricSpace) -> Result<Self> {
        let (na, nb) = (a.len(), b.len());
        let n = na + nb;
        let labels = a
            .labels
            .iter()
            .map(|l| format!("0:{l}"))
            .chain(b.labels.iter().map(|l| format!("1:{l}")))
            .collect();
        let mut dist = vec![Dist::Infinite; n * n];
        for i in 0..na {
            for j in 0..na {
                dist[i * n + j] = a.d(i, j);
            }
        }
        for i in 0..nb {
            for j in 0..nb {
                dist[(na + i) * n + na + j] = b.d(i, j);
            }
        }
        Ok(MetricSpace { labels, dist, grid: None })
    }

    /// Checks zero diagonal, non-negativity, symmetry and the triangle
    /// inequality with `∞`-absorbing sums.
    pub fn validate(&self) -> Result<()> {
        let n = self.len();
        let mut seen = std::collections::HashSet::new();
        if let Some(l) = self.labels.iter().find(|l| !seen.insert(l.as_str())) {
            return Err(Error::BadMetric(format!("duplicate label {l:?}")));
        }
        for i in 0..n {
            if self.d(i, i) != Dist::ZERO {
                return Err(Error::BadMetric(format!("d({0},{0}) = {1} is not zero", self.labels[i], self.d(i, i))));
            }
            for j in 0..n {
                let v = self.d(i, j);
                if v.is_negative() {
                    return Err(Error::BadMetric(format!("negative distance {v} at ({i},{j})")));
                }
                if v != self.d(j, i) {
                    return Err(Error::BadMetric(format!(
                        "asymmetric: d({i},{j}) = {v} but d({j},{i}) = {}",
                        self.d(j, i)
                    )));
                }
            }
        }
        // integer fast path
        let ints: Option<Vec<Option<i64>>> = self
            .dist
            .iter()
            .map(|d| match d {
                Dist::Infinite => Some(None),
                finite => finite.as_integer().map(Some),
            })
            .collect();
        let violation = |i: usize, j: usize, k: usize| {
            Error::BadMetric(format!(
                "triangle inequality fails: d({i},{k}) = {} > d({i},{j}) + d({j},{k}) = {} + {}",
                self.d(i, k),
                self.d(i, j),
                self.d(j, k)
            ))
        };
        match ints {
            Some(ints) => {
                for i in 0..n {
                    for j in 0..n {
                        let Some(dij) = ints[i * n + j] else { continue };
                        for k in 0..n {
                            let Some(djk) = ints[j * n + k] else { continue };
                            match ints[i * n + k] {
                                Some(dik) if dik <= dij.saturating_add(djk) => {}
                                _ => return Err(violation(i, j, k)),
                            }
                        }
                    }
                }
            }
            None => {
                for i in 0..n {
                    for j in 0..n {
                        for k in 0..n {
                            if self.d(i, k) > self.d(i, j).checked_add(self.d(j, k))? {
                                return Err(violation(i, j, k));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}
