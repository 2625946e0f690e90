use serde::{Deserialize, Serialize};

use crate::signal::Position;

/// Scan-progress map over a rectangular grid of square cells.
///
/// Cell `c` sits at column `c % width`, row `c / width`; row 0 is the
/// southern edge.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridMap {
    width: usize,
    height: usize,
    cell_size: f64,
    units_required: u32,
    units_done: Vec<u32>,
}

impl GridMap {
    pub fn new(width: usize, height: usize, cell_size: f64, units_required: u32) -> Self {
        assert!(width > 0 && height > 0, "grid must have at least one cell");
        assert!(units_required > 0, "cells need at least one scan unit");
        Self {
            width,
            height,
            cell_size,
            units_required,
            units_done: vec![0; width * height],
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn cell_size(&self) -> f64 {
        self.cell_size
    }

    pub fn num_cells(&self) -> usize {
        self.units_done.len()
    }

    pub fn progress(&self, cell: usize) -> f64 {
        self.units_done[cell] as f64 / self.units_required as f64
    }

    pub fn progress_map(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.num_cells()).map(|c| self.progress(c))
    }

    pub fn is_complete(&self, cell: usize) -> bool {
        self.units_done[cell] >= self.units_required
    }

    pub fn completed_cells(&self) -> usize {
        (0..self.num_cells()).filter(|&c| self.is_complete(c)).count()
    }

    pub fn incomplete_cells(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_cells()).filter(|&c| !self.is_complete(c))
    }

    pub fn all_complete(&self) -> bool {
        self.units_done.iter().all(|&u| u >= self.units_required)
    }

    /// Adds one scan unit; returns true when this unit completed the cell.
    pub fn scan(&mut self, cell: usize) -> bool {
        if self.is_complete(cell) {
            return false;
        }
        self.units_done[cell] += 1;
        self.is_complete(cell)
    }

    pub fn col_row(&self, cell: usize) -> (usize, usize) {
        (cell % self.width, cell / self.width)
    }

    pub fn cell_at(&self, col: usize, row: usize) -> usize {
        row * self.width + col
    }

    pub fn center(&self, cell: usize, altitude: f64) -> Position {
        let (c, r) = self.col_row(cell);
        Position::new(
            (c as f64 + 0.5) * self.cell_size,
            (r as f64 + 0.5) * self.cell_size,
            altitude,
        )
    }

    /// Cell under a position, clamped to the grid.
    pub fn cell_of(&self, p: &Position) -> usize {
        let clamp = |v: f64, n: usize| ((v / self.cell_size).floor().max(0.0) as usize).min(n - 1);
        self.cell_at(clamp(p.x, self.width), clamp(p.y, self.height))
    }

    /// One king-move step from `from` toward `to`.
    pub fn step_toward(&self, from: usize, to: usize) -> usize {
        let (fc, fr) = self.col_row(from);
        let (tc, tr) = self.col_row(to);
        let step = |a: usize, b: usize| match a.cmp(&b) {
            std::cmp::Ordering::Less => a + 1,
            std::cmp::Ordering::Greater => a - 1,
            std::cmp::Ordering::Equal => a,
        };
        self.cell_at(step(fc, tc), step(fr, tr))
    }

    pub fn center_distance(&self, a: usize, b: usize) -> f64 {
        let (ac, ar) = self.col_row(a);
        let (bc, br) = self.col_row(b);
        let dx = ac as f64 - bc as f64;
        let dy = ar as f64 - br as f64;
        (dx * dx + dy * dy).sqrt() * self.cell_size
    }
}
