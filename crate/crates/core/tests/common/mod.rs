use honeydrone::learning::nn::Mlp;

pub fn rel_err(a: &[f64], b: &[f64]) -> f64 {
    let diff: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
    let scale: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt() + b.iter().map(|x| x * x).sum::<f64>().sqrt();
    diff / scale.max(1e-12)
}

/// Central differences of `loss` with respect to every parameter of `net`.
pub fn numeric_grad(net: &mut Mlp, loss: &dyn Fn(&Mlp) -> f64) -> Vec<f64> {
    let h = 1e-6;
    let flat = net.flatten();
    let mut out = Vec::with_capacity(flat.len());
    for k in 0..flat.len() {
        let mut p = flat.clone();
        p[k] += h;
        net.load_flat(&p).unwrap();
        let up = loss(net);
        p[k] -= 2.0 * h;
        net.load_flat(&p).unwrap();
        let down = loss(net);
        out.push((up - down) / (2.0 * h));
    }
    net.load_flat(&flat).unwrap();
    out
}
