//! Greedy cell assignment for mission drones.

use super::grid::GridMap;

/// Assigns every incomplete cell to exactly one drone.
///
/// `starts[k]` is the cell drone `k` currently occupies. Drones take turns in
/// the given order; on its turn a drone appends the unassigned incomplete cell
/// nearest to the last cell in its sequence (ties go to the lower cell index).
/// With no drones the plan is empty.
pub fn plan_trajectories(grid: &GridMap, starts: &[usize]) -> Vec<Vec<usize>> {
    let mut plans = vec![Vec::new(); starts.len()];
    if starts.is_empty() {
        return plans;
    }
    let mut open: Vec<usize> = grid.incomplete_cells().collect();
    let mut last: Vec<usize> = starts.to_vec();
    while !open.is_empty() {
        for (k, plan) in plans.iter_mut().enumerate() {
            if open.is_empty() {
                break;
            }
            let from = last[k];
            let (slot, _) = open
                .iter()
                .enumerate()
                .map(|(slot, &c)| (slot, grid.center_distance(from, c)))
                .fold((0, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best });
            let cell = open.remove(slot);
            plan.push(cell);
            last[k] = cell;
        }
    }
    plans
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_drone_sweeps_a_row_in_order() {
        let g = GridMap::new(3, 1, 150.0, 1);
        assert_eq!(plan_trajectories(&g, &[0]), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn nothing_left_to_plan() {
        let mut g = GridMap::new(2, 1, 150.0, 1);
        g.scan(0);
        g.scan(1);
        assert_eq!(plan_trajectories(&g, &[0, 1]), vec![Vec::<usize>::new(), vec![]]);
    }

    #[test]
    fn no_drones_no_plan() {
        let g = GridMap::new(2, 2, 150.0, 1);
        assert!(plan_trajectories(&g, &[]).is_empty());
    }

    #[test]
    fn opposite_corners_take_adjacent_cells() {
        // 4x1 strip, drones parked over the outer cells which are already done.
        let mut g = GridMap::new(4, 1, 150.0, 1);
        g.scan(0);
        g.scan(3);
        let plans = plan_trajectories(&g, &[0, 3]);
        // brute force over both assignments of {1, 2}
        let cost = |a: usize, b: usize| g.center_distance(0, a) + g.center_distance(3, b);
        let best = if cost(1, 2) <= cost(2, 1) { (1, 2) } else { (2, 1) };
        assert_eq!(plans, vec![vec![best.0], vec![best.1]]);
    }

    #[test]
    fn every_incomplete_cell_planned_once() {
        let mut g = GridMap::new(5, 5, 150.0, 1);
        for c in [0, 7, 13, 24] {
            g.scan(c);
        }
        let plans = plan_trajectories(&g, &[12, 12, 3]);
        let mut all: Vec<usize> = plans.concat();
        all.sort_unstable();
        let expected: Vec<usize> = g.incomplete_cells().collect();
        assert_eq!(all, expected);
    }
}
