//! Pigeonhole subroutines used by the extraction pipelines: monochromatic
//! subgrids of vertex-colored grids and monochromatic cliques of
//! edge-colored complete graphs.
//!
//! All searches are best-effort: below the guarantee thresholds they run
//! the same pigeonhole pipeline on whatever is there and return `None` on
//! shortfall. Ties break toward the smallest color id, then the
//! lexicographically smallest index set, so witnesses are reproducible.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::grid::Subgrid;

/// Vertex coloring of a grid, same flat layout as a rank array.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridColoring {
    dims: Vec<usize>,
    k: usize,
    colors: Vec<usize>,
}

impl GridColoring {
    pub fn new(dims: Vec<usize>, k: usize, colors: Vec<usize>) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::BadDims(dims));
        }
        if k == 0 {
            return Err(Error::BadParameter("need at least one color".into()));
        }
        let len: usize = dims.iter().product();
        if colors.len() != len {
            return Err(Error::BadParameter(format!(
                "expected {len} colors, got {}",
                colors.len()
            )));
        }
        if let Some(&c) = colors.iter().find(|&&c| c >= k) {
            return Err(Error::BadParameter(format!("color id {c} out of range 0..{k}")));
        }
        Ok(GridColoring { dims, k, colors })
    }

    pub fn from_fn<F>(dims: Vec<usize>, k: usize, mut f: F) -> Result<Self>
    where
        F: FnMut(&[usize]) -> usize,
    {
        let len: usize = dims.iter().product();
        let mut colors = Vec::with_capacity(len);
        let mut point: Vec<usize> = vec![1; dims.len()];
        for _ in 0..len {
            colors.push(f(&point));
            for (x, &n) in point.iter_mut().zip(&dims) {
                *x += 1;
                if *x <= n {
                    break;
                }
                *x = 1;
            }
        }
        GridColoring::new(dims, k, colors)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn color_at(&self, point: &[usize]) -> usize {
        let mut off = 0;
        let mut stride = 1;
        for (x, &n) in point.iter().zip(&self.dims) {
            off += (x - 1) * stride;
            stride *= n;
        }
        self.colors[off]
    }

    /// The (d-1)-dimensional coloring at `first = i`, dimension 1 dropped.
    fn slice_first_dim(&self, i: usize) -> GridColoring {
        let n0 = self.dims[0];
        let rest: Vec<usize> = self.dims[1..].to_vec();
        let colors = self
            .colors
            .iter()
            .skip(i - 1)
            .step_by(n0)
            .copied()
            .collect();
        GridColoring { dims: rest, k: self.k, colors }
    }
}

/// Edge coloring of the complete graph on vertices `1..=n_vertices`.
#[derive(Debug, Clone)]
pub struct EdgeColoring {
    n_vertices: usize,
    k: usize,
    /// colors indexed by pair (u < v): offset (v-2)(v-1)/2 + (u-1)
    colors: Vec<usize>,
}

impl EdgeColoring {
    pub fn from_fn<F>(n_vertices: usize, k: usize, mut f: F) -> Result<Self>
    where
        F: FnMut(usize, usize) -> usize,
    {
        if n_vertices == 0 || k == 0 {
            return Err(Error::BadParameter("need vertices and colors".into()));
        }
        let mut colors = Vec::with_capacity(n_vertices * (n_vertices - 1) / 2);
        for v in 2..=n_vertices {
            for u in 1..v {
                let c = f(u, v);
                if c >= k {
                    return Err(Error::BadParameter(format!(
                        "edge color {c} out of range 0..{k}"
                    )));
                }
                colors.push(c);
            }
        }
        Ok(EdgeColoring { n_vertices, k, colors })
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn color(&self, u: usize, v: usize) -> usize {
        debug_assert!(u != v && u >= 1 && v >= 1 && u <= self.n_vertices && v <= self.n_vertices);
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        self.colors[(b - 2) * (b - 1) / 2 + (a - 1)]
    }
}

/// Monochromatic `t x n` subgrid of a 2-D coloring: `t` indices along
/// dimension 1, `n` along dimension 2.
///
/// Each dimension-1 line ("row") pigeonholes `n` same-colored cells, rows
/// are then grouped by the (position set, color) pair, and any group of
/// `t` rows wins. Success is guaranteed at the classical grid sizes; below
/// them the result is best-effort.
pub fn mono_subgrid_2d(
    col: &GridColoring,
    t: usize,
    n: usize,
) -> Option<(Vec<usize>, Vec<usize>, usize)> {
    assert_eq!(col.dims().len(), 2, "mono_subgrid_2d needs a 2-D coloring");
    assert!(t >= 1 && n >= 1);
    let (rows_avail, cols_avail) = (col.dims()[0], col.dims()[1]);
    if cols_avail < n || rows_avail < t {
        return None;
    }
    // (positions, color) -> rows holding that choice
    let mut groups: BTreeMap<(Vec<usize>, usize), Vec<usize>> = BTreeMap::new();
    for a in 1..=rows_avail {
        let mut per_color: Vec<Vec<usize>> = vec![Vec::new(); col.k()];
        for y in 1..=cols_avail {
            per_color[col.color_at(&[a, y])].push(y);
        }
        // smallest color with n cells, earliest positions
        if let Some((c, ys)) =
            per_color.iter().enumerate().find(|(_, ys)| ys.len() >= n)
        {
            groups.entry((ys[..n].to_vec(), c)).or_default().push(a);
        }
    }
    groups
        .iter()
        .filter(|(_, rows)| rows.len() >= t)
        .map(|((ys, c), rows)| (rows[..t].to_vec(), ys.clone(), *c))
        .min_by(|a, b| (a.2, &a.1, &a.0).cmp(&(b.2, &b.1, &b.0)))
}

/// Monochromatic `n x ... x n` subgrid of a d-dimensional coloring.
///
/// Recursion on dimension 1: every slice yields a monochromatic subgrid of
/// the remaining dimensions, slices are grouped by (subgrid, color), and
/// `n` agreeing slices assemble the answer.
pub fn mono_subgrid_d(col: &GridColoring, n: usize) -> Option<(Subgrid, usize)> {
    assert!(col.dims().len() >= 2, "mono_subgrid_d needs d >= 2");
    assert!(n >= 1);
    mono_subgrid_rec(col, n)
}

fn mono_subgrid_rec(col: &GridColoring, n: usize) -> Option<(Subgrid, usize)> {
    let d = col.dims().len();
    if col.dims().iter().any(|&s| s < n) {
        return None;
    }
    if d == 1 {
        let mut per_color: Vec<Vec<usize>> = vec![Vec::new(); col.k()];
        for x in 1..=col.dims()[0] {
            per_color[col.color_at(&[x])].push(x);
        }
        return per_color
            .iter()
            .enumerate()
            .find(|(_, xs)| xs.len() >= n)
            .map(|(c, xs)| (Subgrid { indices: vec![xs[..n].to_vec()] }, c));
    }
    let mut groups: BTreeMap<(Vec<Vec<usize>>, usize), Vec<usize>> = BTreeMap::new();
    for i in 1..=col.dims()[0] {
        if let Some((sub, c)) = mono_subgrid_rec(&col.slice_first_dim(i), n) {
            groups.entry((sub.indices, c)).or_default().push(i);
        }
    }
    groups
        .iter()
        .filter(|(_, slices)| slices.len() >= n)
        .min_by(|a, b| (a.0 .1, &a.0 .0).cmp(&(b.0 .1, &b.0 .0)))
        .map(|((rest, c), slices)| {
            let mut indices = Vec::with_capacity(d);
            indices.push(slices[..n].to_vec());
            indices.extend(rest.iter().cloned());
            (Subgrid { indices }, *c)
        })
}

/// Monochromatic clique of `n` vertices via the greedy chain argument:
/// repeatedly take the least remaining vertex, label it with its most
/// common edge color among the survivors, and keep that color class.
///
/// Every pair (chain vertex, later chain vertex) carries the earlier
/// vertex's label color, so `n-1` same-labeled chain vertices plus the
/// next chain vertex form a clique. Guaranteed when the graph has at least
/// `k^(k*n)` vertices; best-effort below.
pub fn mono_clique(ec: &EdgeColoring, n: usize) -> Option<(Vec<usize>, usize)> {
    assert!(n >= 2);
    if ec.n_vertices() < n {
        return None;
    }
    let mut alive: Vec<usize> = (1..=ec.n_vertices()).collect();
    let mut chain: Vec<(usize, usize)> = Vec::new(); // (vertex, label)
    while let Some((&v, rest)) = alive.split_first() {
        let mut classes: Vec<Vec<usize>> = vec![Vec::new(); ec.k()];
        for &u in rest {
            classes[ec.color(v, u)].push(u);
        }
        // largest class, smallest color on ties
        let (label, class) = classes
            .into_iter()
            .enumerate()
            .rev()
            .max_by_key(|(_, class)| class.len())
            .unwrap();
        chain.push((v, label));
        alive = class;
    }
    // first color whose labeled prefix supports an n-clique
    for color in 0..ec.k() {
        let positions: Vec<usize> = chain
            .iter()
            .enumerate()
            .filter(|(_, (_, l))| *l == color)
            .map(|(i, _)| i)
            .collect();
        if positions.len() >= n - 1 && positions[n - 2] + 1 < chain.len() {
            let mut verts: Vec<usize> =
                positions[..n - 1].iter().map(|&i| chain[i].0).collect();
            verts.push(chain[positions[n - 2] + 1].0);
            return Some((verts, color));
        }
    }
    None
}
