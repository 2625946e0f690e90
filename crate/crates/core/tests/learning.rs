use honeydrone::learning::nn::{softmax_rows, Mlp};
use honeydrone::learning::{A2cAgent, A2cConfig, ApdFilter, FilterMode, ReplayMemory, Transition};
use honeydrone::SimRng;
use ndarray::Array2;
use rand::{Rng, SeedableRng};
use statrs::distribution::{ChiSquared, ContinuousCDF};

mod common;
use common::{numeric_grad, rel_err};

#[test]
fn mlp_backprop_matches_finite_differences() {
    let mut rng = SimRng::seed_from_u64(7);
    let mut net = Mlp::new(&[4, 8, 8, 4], 0.0, &mut rng).unwrap();
    // move layer-norm parameters off their defaults so their gradients are exercised
    for l in &mut net.layers {
        l.gamma.mapv_inplace(|_| rng.random_range(0.5..1.5));
        l.beta.mapv_inplace(|_| rng.random_range(-0.2..0.2));
    }
    let x = Array2::from_shape_fn((5, 4), |_| rng.random_range(-1.0..1.0));
    let y = Array2::from_shape_fn((5, 4), |_| rng.random_range(-1.0..1.0));
    let loss = |n: &Mlp| {
        let p = softmax_rows(&n.forward(x.view()).unwrap());
        -(&y * &p.mapv(f64::ln)).sum() + n.forward(x.view()).unwrap().mapv(|v| v * v).sum() * 0.1
    };
    let (out, cache) = net.forward_train::<SimRng>(x.view(), None).unwrap();
    let p = softmax_rows(&out);
    // d/dz of −Σ y·ln softmax(z) is p·Σy − y per row
    let row_sums = y.sum_axis(ndarray::Axis(1)).insert_axis(ndarray::Axis(1));
    let d_out = &p * &row_sums - &y + &out * 0.2;
    let analytic = net.backward(&cache, &d_out).flatten();
    let numeric = numeric_grad(&mut net, &loss);
    let e = rel_err(&analytic, &numeric);
    assert!(e < 1e-4, "relative error {e}");
}

fn batch(rng: &mut SimRng, dim: usize, n: usize) -> Vec<Transition> {
    (0..n)
        .map(|k| Transition {
            state: (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect(),
            action: rng.random_range(0..10),
            reward: rng.random_range(0.0..3.0),
            next_state: (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect(),
            done: k % 3 == 0,
        })
        .collect()
}

fn check_agent(mode: FilterMode, entropy_coef: f64) {
    let cfg = A2cConfig { hidden: vec![8, 8], entropy_coef, filter_mode: mode, ..Default::default() };
    let filter = ApdFilter::from_choices(&[4, 0, 1, 7, 0, 0, 2, 0, 9, 1], 1e-3);
    let mut agent = A2cAgent::new(4, cfg, SimRng::seed_from_u64(3)).unwrap().with_filter(filter);
    let mut rng = SimRng::seed_from_u64(11);
    let data = batch(&mut rng, 4, 6);
    let refs: Vec<&Transition> = data.iter().collect();
    let weights: Vec<f64> = (0..6).map(|_| rng.random_range(0.2..1.0)).collect();

    let g = agent.gradients(&refs, &weights, None).unwrap();

    // actor: the advantage is a constant, so freeze the critic while perturbing the policy
    let frozen = agent.clone();
    let actor_loss = |p: &Mlp| {
        let mut a = frozen.clone();
        a.policy = p.clone();
        a.gradients(&refs, &weights, None).unwrap().losses.actor
    };
    let mut policy = agent.policy.clone();
    let e = rel_err(&g.policy.flatten(), &numeric_grad(&mut policy, &actor_loss));
    assert!(e < 1e-4, "actor relative error {e} ({mode:?})");

    // critic: the bootstrap target V(s′) is treated as a constant
    let targets: Vec<f64> = data
        .iter()
        .map(|t| if t.done { t.reward } else { t.reward + 0.99 * agent.state_value(&t.next_state).unwrap() })
        .collect();
    let critic_loss = |v: &Mlp| {
        data.iter()
            .zip(&targets)
            .zip(&weights)
            .map(|((t, y), w)| {
                let x = Array2::from_shape_vec((1, 4), t.state.clone()).unwrap();
                let d = y - v.forward(x.view()).unwrap()[[0, 0]];
                w * d * d
            })
            .sum::<f64>()
            / data.len() as f64
    };
    let e = rel_err(&g.value.flatten(), &numeric_grad(&mut agent.value, &critic_loss));
    assert!(e < 1e-4, "critic relative error {e}");
}

#[test]
fn actor_critic_gradients_probability_filter() {
    check_agent(FilterMode::Probability, 0.0);
}

#[test]
fn actor_critic_gradients_logit_filter_with_entropy() {
    check_agent(FilterMode::Logit, 0.05);
}

#[test]
fn zero_advantage_gives_zero_actor_gradient() {
    let cfg = A2cConfig { hidden: vec![8, 8], gamma: 0.0, ..Default::default() };
    let agent = A2cAgent::new(4, cfg, SimRng::seed_from_u64(3)).unwrap();
    let mut rng = SimRng::seed_from_u64(1);
    let mut data = batch(&mut rng, 4, 4);
    // reward equal to the current value estimate makes every advantage zero
    for t in &mut data {
        t.reward = agent.state_value(&t.state).unwrap();
    }
    let refs: Vec<&Transition> = data.iter().collect();
    let g = agent.gradients(&refs, &[1.0; 4], None).unwrap();
    assert!(g.policy.flatten().iter().all(|v| v.abs() < 1e-12));
}

#[test]
fn terminal_target_is_reward() {
    let cfg = A2cConfig { hidden: vec![8, 8], ..Default::default() };
    let agent = A2cAgent::new(2, cfg, SimRng::seed_from_u64(0)).unwrap();
    let t = Transition { state: vec![0.1, 0.2], action: 0, reward: 1.0, next_state: vec![5.0, 5.0], done: true };
    let g = agent.gradients(&[&t], &[1.0], None).unwrap();
    let v = agent.state_value(&t.state).unwrap();
    assert!((g.td_errors[0] - (1.0 - v)).abs() < 1e-12);
}

#[test]
fn replay_sampling_follows_priorities() {
    let mut m = ReplayMemory::new(16, 0.6, 1e-3);
    let mut rng = SimRng::seed_from_u64(21);
    for k in 0..16 {
        m.push(Transition { state: vec![], action: 0, reward: 0.0, next_state: vec![], done: false });
        m.set_priority(k, 0.1 + rng.random_range(0.0..2.0));
    }
    let draws = 100_000;
    let mut counts = [0usize; 16];
    for _ in 0..draws {
        counts[m.draw(&mut rng)] += 1;
    }
    let total: f64 = (0..16).map(|k| m.priority(k).powf(0.6)).sum();
    let chi2: f64 = (0..16)
        .map(|k| {
            let expected = draws as f64 * m.priority(k).powf(0.6) / total;
            (counts[k] as f64 - expected).powi(2) / expected
        })
        .sum();
    let p = 1.0 - ChiSquared::new(15.0).unwrap().cdf(chi2);
    assert!(p > 0.01, "chi2 {chi2}, p {p}");
}
