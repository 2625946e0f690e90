//! Greedy honey-drone placement.
//!
//! Each honey drone in turn claims between `tau_lower` and `tau_upper` of the
//! still-unprotected mission drones inside its protection radius. A honey
//! drone that sees too few moves to the nearest mission-drone position from
//! which the count is within bounds; one that sees too many keeps only the
//! nearest `tau_upper`. Candidate positions are limited to mission-drone
//! positions.

use serde::{Deserialize, Serialize};

use super::drone::DroneId;
use crate::signal::Position;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HdPlacement {
    pub hd: DroneId,
    pub position: Position,
    pub protects: Vec<DroneId>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeployParams {
    /// Protection radius, normally the range of level `DS_5`.
    pub radius: f64,
    pub tau_lower: usize,
    pub tau_upper: usize,
}

/// Places honey drones; output order follows `hds`.
pub fn deploy_honey_drones(
    hds: &[(DroneId, Position)],
    mds: &[(DroneId, Position)],
    params: DeployParams,
) -> Vec<HdPlacement> {
    let mut pool: Vec<(DroneId, Position)> = mds.to_vec();
    let mut out = Vec::with_capacity(hds.len());

    for &(hd, here) in hds {
        if pool.is_empty() {
            out.push(HdPlacement { hd, position: here, protects: Vec::new() });
            continue;
        }
        let covered = in_range(&pool, &here, params.radius);

        if covered.len() < params.tau_lower {
            match relocate(&pool, &here, params) {
                Some((position, members)) => {
                    let protects = take(&mut pool, &members);
                    out.push(HdPlacement { hd, position, protects });
                }
                None => out.push(HdPlacement { hd, position: here, protects: Vec::new() }),
            }
        } else if covered.len() <= params.tau_upper {
            let protects = take(&mut pool, &covered);
            out.push(HdPlacement { hd, position: here, protects });
        } else {
            let mut nearest: Vec<(f64, usize)> =
                covered.iter().map(|&k| (pool[k].1.distance_to(&here), k)).collect();
            let cut = params.tau_upper;
            nearest.select_nth_unstable_by(cut - 1, |a, b| {
                a.0.total_cmp(&b.0).then(pool[a.1].0.cmp(&pool[b.1].0))
            });
            let members: Vec<usize> = nearest[..cut].iter().map(|&(_, k)| k).collect();
            let protects = take(&mut pool, &members);
            out.push(HdPlacement { hd, position: here, protects });
        }
    }
    out
}

/// Pool slots strictly inside `radius` of `at`.
fn in_range(pool: &[(DroneId, Position)], at: &Position, radius: f64) -> Vec<usize> {
    pool.iter()
        .enumerate()
        .filter(|(_, (_, p))| p.distance_to(at) < radius)
        .map(|(k, _)| k)
        .collect()
}

/// Nearest feasible mission-drone position, with the drones it would cover.
fn relocate(
    pool: &[(DroneId, Position)],
    here: &Position,
    params: DeployParams,
) -> Option<(Position, Vec<usize>)> {
    let mut best: Option<(f64, DroneId, usize)> = None;
    for (k, (id, p)) in pool.iter().enumerate() {
        let d = p.distance_to(here);
        if let Some((bd, bid, _)) = best {
            if d > bd || (d == bd && *id > bid) {
                continue;
            }
        }
        let n = pool.iter().filter(|(_, q)| q.distance_to(p) < params.radius).count();
        if (params.tau_lower..=params.tau_upper).contains(&n) {
            best = Some((d, *id, k));
        }
    }
    best.map(|(_, _, k)| {
        let at = pool[k].1;
        (at, in_range(pool, &at, params.radius))
    })
}

/// Removes the given pool slots, returning their ids in ascending order.
fn take(pool: &mut Vec<(DroneId, Position)>, slots: &[usize]) -> Vec<DroneId> {
    let mut slots = slots.to_vec();
    slots.sort_unstable_by(|a, b| b.cmp(a));
    let mut ids: Vec<DroneId> = slots.iter().map(|&k| pool.swap_remove(k).0).collect();
    ids.sort_unstable();
    ids
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: DeployParams = DeployParams { radius: 100.0, tau_lower: 2, tau_upper: 4 };

    fn at(x: f64) -> Position {
        Position::new(x, 0.0, 0.0)
    }

    #[test]
    fn empty_pool_passes_through() {
        let hds = [(100, at(5.0)), (101, at(50.0))];
        let out = deploy_honey_drones(&hds, &[], P);
        assert_eq!(out.len(), 2);
        for (o, (id, pos)) in out.iter().zip(hds) {
            assert_eq!((o.hd, o.position), (id, pos));
            assert!(o.protects.is_empty());
        }
    }

    #[test]
    fn within_bounds_stays_and_takes_all() {
        let mds = [(1, at(10.0)), (2, at(20.0)), (3, at(30.0))];
        let out = deploy_honey_drones(&[(100, at(0.0))], &mds, P);
        assert_eq!(out[0].position, at(0.0));
        assert_eq!(out[0].protects, vec![1, 2, 3]);
    }

    #[test]
    fn too_many_keeps_nearest_upper_bound() {
        let mds: Vec<_> = (1..=6).map(|k| (k, at(10.0 * k as f64))).collect();
        let out = deploy_honey_drones(&[(100, at(0.0))], &mds, P);
        assert_eq!(out[0].protects, vec![1, 2, 3, 4]);
    }

    #[test]
    fn too_few_relocates_to_feasible_md() {
        // only one MD near the HD; a cluster of three sits far away
        let mds = [(1, at(50.0)), (2, at(1000.0)), (3, at(1010.0)), (4, at(1020.0))];
        let out = deploy_honey_drones(&[(100, at(0.0))], &mds, P);
        // MD 1's position only covers itself; MD 2 is the nearest feasible spot
        assert_eq!(out[0].position, at(1000.0));
        assert_eq!(out[0].protects, vec![2, 3, 4]);
    }

    #[test]
    fn infeasible_keeps_position() {
        let mds = [(1, at(500.0))];
        let out = deploy_honey_drones(&[(100, at(0.0))], &mds, P);
        assert_eq!(out[0].position, at(0.0));
        assert!(out[0].protects.is_empty());
    }

    #[test]
    fn second_hd_only_sees_leftovers() {
        let mds: Vec<_> = (1..=6).map(|k| (k, at(10.0 * k as f64))).collect();
        let out = deploy_honey_drones(&[(100, at(0.0)), (101, at(0.0))], &mds, P);
        assert_eq!(out[0].protects, vec![1, 2, 3, 4]);
        assert_eq!(out[1].protects, vec![5, 6]);
    }
}
