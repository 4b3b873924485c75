//! Column-strip divisions of grids.

use super::RBDivision;
use crate::gen::gen_grid;
use crate::graph::Vertex;

/// Strip width `ℓ` with `ℓ · rows` closest to `(rows · cols)^(2/3)`.
pub fn grid_block_for(rows: usize, cols: usize) -> usize {
    let target = ((rows * cols) as f64).powf(2.0 / 3.0) / rows.max(1) as f64;
    (target.round() as usize).clamp(1, cols.max(1))
}

/// Strips of `block` consecutive columns separated by single separator
/// columns, on the `rows x cols` grid with vertex `r * cols + c`.
///
/// When one strip would span the whole grid, the middle column separates two
/// strips instead, so every component keeps a boundary. Components have at
/// most `block · rows` vertices; `b` is `rows` when no strip lies between two
/// separator columns and `2 rows` otherwise.
pub fn grid_division(rows: usize, cols: usize, block: usize) -> RBDivision {
    let g = gen_grid(rows, cols);
    let block = block.clamp(1, cols.max(1));
    let mut sep_cols = Vec::new();
    let mut c = block;
    while c < cols {
        sep_cols.push(c);
        c += block + 1;
    }
    let mut width = block;
    if sep_cols.is_empty() && cols >= 2 {
        sep_cols.push(cols / 2);
        width = cols / 2;
    }
    let mut is_sep = vec![false; cols];
    for &c in &sep_cols {
        is_sep[c] = true;
    }
    let mut strip_of = vec![0usize; cols];
    let mut strip = 0;
    for c in 0..cols {
        if is_sep[c] {
            strip += 1;
        } else {
            strip_of[c] = strip;
        }
    }
    let id = |r: usize, c: usize| (r * cols + c) as Vertex;
    let mut groups = vec![Vec::new(); strip + 1];
    let mut separator = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if is_sep[c] {
                separator.push(id(r, c));
            } else {
                groups[strip_of[c]].push(id(r, c));
            }
        }
    }
    let interior = sep_cols.len() >= 2;
    let b = if interior { 2 * rows } else { rows };
    RBDivision::from_groups(&g, width * rows, b, separator, groups)
}
