//! Per-run player state behind each scheme.

use crate::error::Result;
use crate::fleet::{AttackPolicy, AttackerView, RoundReport, World};
use crate::hypergame::{AttackerHt, DefenderHt, DefenderObservation};
use crate::learning::encoding::{attacker_reward, attacker_state, defender_reward, defender_state};
use crate::learning::{A2cAgent, Transition};
use crate::signal::StrategyIndex;

#[derive(Debug, Clone)]
pub enum DefenderAgent {
    Fixed(StrategyIndex),
    Ht(DefenderHt),
    Drl {
        agent: Box<A2cAgent>,
        last: Option<(Vec<f64>, usize)>,
    },
}

impl DefenderAgent {
    pub fn drl(agent: A2cAgent) -> Self {
        DefenderAgent::Drl { agent: Box::new(agent), last: None }
    }

    pub fn begin_episode(&mut self) {
        if let DefenderAgent::Ht(h) = self {
            h.begin_episode();
        }
    }

    /// Honey-drone signal level for the coming round.
    pub fn select(&mut self, world: &World) -> Result<StrategyIndex> {
        match self {
            DefenderAgent::Fixed(j) => Ok(*j),
            DefenderAgent::Ht(h) => Ok(h.select(&DefenderObservation::from_world(world))),
            DefenderAgent::Drl { agent, last } => {
                let s = defender_state(world);
                let a = agent.act(&s)?;
                *last = Some((s, a.zero_based()));
                Ok(a)
            }
        }
    }

    /// Learns from a finished round; `world` is the state after it.
    pub fn observe(&mut self, report: &RoundReport, world: &World) {
        match self {
            DefenderAgent::Fixed(_) => {}
            DefenderAgent::Ht(h) => h.observe(&report.attack),
            DefenderAgent::Drl { agent, last } => {
                if let Some((state, action)) = last.take() {
                    agent.remember(Transition {
                        state,
                        action,
                        reward: defender_reward(report),
                        next_state: defender_state(world),
                        done: report.terminal,
                    });
                    agent.train_step();
                }
            }
        }
    }

    pub fn end_episode(&mut self) {
        if let DefenderAgent::Drl { agent, .. } = self {
            agent.end_episode();
        }
    }
}

#[derive(Debug, Clone)]
pub enum AttackerAgent {
    Fixed(StrategyIndex),
    Ht(AttackerHt),
    Drl {
        agent: Box<A2cAgent>,
        last: Option<(Vec<f64>, usize)>,
        /// Transition waiting for the next observation.
        pending: Option<(Vec<f64>, usize, f64)>,
    },
}

impl AttackerAgent {
    pub fn drl(agent: A2cAgent) -> Self {
        AttackerAgent::Drl { agent: Box::new(agent), last: None, pending: None }
    }

    pub fn begin_episode(&mut self) {
        if let AttackerAgent::Ht(h) = self {
            h.begin_episode();
        }
    }

    pub fn observe(&mut self, report: &RoundReport) {
        match self {
            AttackerAgent::Fixed(_) => {}
            AttackerAgent::Ht(h) => h.observe(&report.attacker_view, &report.attack),
            AttackerAgent::Drl { agent, last, pending } => {
                if let Some((s, a)) = last.take() {
                    let r = attacker_reward(report);
                    if report.terminal {
                        agent.remember(Transition { next_state: s.clone(), state: s, action: a, reward: r, done: true });
                        agent.train_step();
                    } else {
                        *pending = Some((s, a, r));
                    }
                }
            }
        }
    }

    pub fn end_episode(&mut self) {
        if let AttackerAgent::Drl { agent, pending, .. } = self {
            if let Some((s, a, r)) = pending.take() {
                agent.remember(Transition { next_state: s.clone(), state: s, action: a, reward: r, done: true });
                agent.train_step();
            }
            agent.end_episode();
        }
    }
}

impl AttackPolicy for AttackerAgent {
    fn select(&mut self, view: &AttackerView) -> StrategyIndex {
        match self {
            AttackerAgent::Fixed(i) => *i,
            AttackerAgent::Ht(h) => h.select(view),
            AttackerAgent::Drl { agent, last, pending } => {
                let s = attacker_state(view);
                if let Some((ps, pa, pr)) = pending.take() {
                    agent.remember(Transition { state: ps, action: pa, reward: pr, next_state: s.clone(), done: false });
                    agent.train_step();
                }
                let a = agent.act(&s).expect("attacker state has a fixed size");
                *last = Some((s, a.zero_based()));
                a
            }
        }
    }
}
