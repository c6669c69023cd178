//! One-vs-rest linear classifiers trained by full-batch (sub)gradient
//! descent with a decaying step, eta_t = eta0 / sqrt(t). The objective per
//! binary problem is (1/m) sum(loss) + (1/C) R(w); the bias never enters
//! R. L1 is applied proximally: take the loss step, then soft-threshold
//! by eta_t / C.
//!
//! The seed only permutes gradient accumulation order within an epoch, so
//! results are bit-reproducible per seed while the mathematics stays
//! full-batch.

use std::io::Write;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;

use crate::classify::{argmax, parse_kv_lines, parse_rows, Section};
use crate::error::{Error, Result};
use crate::features::SparseVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Loss {
    Logistic,
    Hinge,
}

impl Loss {
    pub fn as_str(self) -> &'static str {
        match self {
            Loss::Logistic => "logistic",
            Loss::Hinge => "hinge",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "logistic" => Ok(Loss::Logistic),
            "hinge" => Ok(Loss::Hinge),
            other => Err(Error::invalid(format!("unknown loss {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Penalty {
    L2,
    L1,
}

impl Penalty {
    pub fn as_str(self) -> &'static str {
        match self {
            Penalty::L2 => "l2",
            Penalty::L1 => "l1",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "l2" => Ok(Penalty::L2),
            "l1" => Ok(Penalty::L1),
            other => Err(Error::invalid(format!("unknown penalty {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearConfig {
    pub loss: Loss,
    pub penalty: Penalty,
    /// inverse regularization strength; the penalty is weighted 1/C
    pub c: f64,
    pub eta0: f64,
    pub epochs: usize,
    pub seed: u64,
}

impl Default for LinearConfig {
    fn default() -> Self {
        LinearConfig {
            loss: Loss::Logistic,
            penalty: Penalty::L2,
            c: 1.0,
            eta0: 1.0,
            epochs: 50,
            seed: 42,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    labels: Vec<String>,
    /// per-class dense weights, K x n
    weights: Vec<Vec<f64>>,
    biases: Vec<f64>,
    config: LinearConfig,
    n: usize,
}

/// Pointwise loss as a function of the margin y * (w.x + b). The logistic
/// branch is the overflow-safe form of ln(1 + exp(-margin)).
pub fn pointwise_loss(loss: Loss, margin: f64) -> f64 {
    match loss {
        Loss::Logistic => (-margin).max(0.0) + (-margin.abs()).exp().ln_1p(),
        Loss::Hinge => (1.0 - margin).max(0.0),
    }
}

/// d(loss)/d(margin). At the hinge kink (margin exactly 1) the flat-side
/// subgradient 0 is taken.
pub fn pointwise_margin_grad(loss: Loss, margin: f64) -> f64 {
    match loss {
        Loss::Logistic => -1.0 / (1.0 + margin.exp()),
        Loss::Hinge => {
            if margin < 1.0 {
                -1.0
            } else {
                0.0
            }
        }
    }
}

fn dot(w: &[f64], x: &SparseVector) -> f64 {
    x.entries().iter().map(|&(i, v)| w[i] * v).sum()
}

/// Regularized empirical risk of one binary problem; ys are +1/-1.
pub fn objective(
    xs: &[SparseVector],
    ys: &[f64],
    w: &[f64],
    b: f64,
    config: &LinearConfig,
) -> f64 {
    let m = xs.len() as f64;
    let data: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, &y)| pointwise_loss(config.loss, y * (dot(w, x) + b)))
        .sum();
    let reg = match config.penalty {
        Penalty::L2 => 0.5 * w.iter().map(|v| v * v).sum::<f64>(),
        Penalty::L1 => w.iter().map(|v| v.abs()).sum::<f64>(),
    };
    data / m + reg / config.c
}

fn soft_threshold(w: f64, t: f64) -> f64 {
    if w > t {
        w - t
    } else if w < -t {
        w + t
    } else {
        0.0
    }
}

fn train_one(
    xs: &[SparseVector],
    ys: &[f64],
    n: usize,
    config: &LinearConfig,
    label: &str,
    mut rng: ChaCha20Rng,
) -> Result<(Vec<f64>, f64)> {
    let m = xs.len();
    let inv_m = 1.0 / m as f64;
    let mut w = vec![0.0f64; n];
    let mut b = 0.0f64;
    let mut order: Vec<usize> = (0..m).collect();

    for t in 1..=config.epochs {
        order.shuffle(&mut rng);
        let eta = config.eta0 / (t as f64).sqrt();

        // margins in parallel, accumulation sequential in shuffled order
        let factors: Vec<(usize, f64)> = order
            .par_iter()
            .map(|&i| {
                let margin = ys[i] * (dot(&w, &xs[i]) + b);
                (i, pointwise_margin_grad(config.loss, margin) * ys[i])
            })
            .collect();
        let mut gw = vec![0.0f64; n];
        let mut gb = 0.0f64;
        for (i, factor) in factors {
            if factor != 0.0 {
                for &(j, v) in xs[i].entries() {
                    gw[j] += factor * v;
                }
                gb += factor;
            }
        }

        match config.penalty {
            Penalty::L2 => {
                for j in 0..n {
                    w[j] -= eta * (gw[j] * inv_m + w[j] / config.c);
                }
            }
            Penalty::L1 => {
                let threshold = eta / config.c;
                for j in 0..n {
                    w[j] = soft_threshold(w[j] - eta * gw[j] * inv_m, threshold);
                }
            }
        }
        b -= eta * gb * inv_m;

        if !b.is_finite() || w.iter().any(|v| !v.is_finite()) {
            return Err(Error::Divergence {
                epoch: t,
                what: format!("class {label:?} reached non-finite parameters"),
            });
        }
    }
    Ok((w, b))
}

/// Trains one binary problem per class against the rest. Class k draws
/// from stream k of the seeded generator, so class results are
/// independent of each other and of scheduling.
pub fn train_linear(
    xs: &[SparseVector],
    labels: &[String],
    n: usize,
    config: &LinearConfig,
) -> Result<LinearModel> {
    if xs.len() != labels.len() {
        return Err(Error::invalid(format!(
            "{} vectors but {} labels",
            xs.len(),
            labels.len()
        )));
    }
    if xs.is_empty() {
        return Err(Error::invalid("no training documents"));
    }
    if n == 0 {
        return Err(Error::invalid("empty feature space"));
    }
    if !(config.c > 0.0 && config.c.is_finite()) {
        return Err(Error::invalid(format!("C {} must be positive", config.c)));
    }
    if !(config.eta0 > 0.0 && config.eta0.is_finite()) {
        return Err(Error::invalid(format!("eta0 {} must be positive", config.eta0)));
    }
    if config.epochs == 0 {
        return Err(Error::invalid("epochs must be at least 1"));
    }
    for x in xs {
        if let Some(max) = x.max_index() {
            if max >= n {
                return Err(Error::Dimension { index: max, dim: n });
            }
        }
    }
    let mut classes: Vec<String> = labels.to_vec();
    classes.sort_unstable();
    classes.dedup();
    if classes.len() < 2 {
        return Err(Error::invalid("need at least two distinct classes"));
    }

    let mut weights = Vec::with_capacity(classes.len());
    let mut biases = Vec::with_capacity(classes.len());
    for (k, class) in classes.iter().enumerate() {
        let ys: Vec<f64> = labels
            .iter()
            .map(|l| if l == class { 1.0 } else { -1.0 })
            .collect();
        let mut rng = ChaCha20Rng::seed_from_u64(config.seed);
        rng.set_stream(k as u64);
        let (w, b) = train_one(xs, &ys, n, config, class, rng)?;
        weights.push(w);
        biases.push(b);
    }
    Ok(LinearModel {
        labels: classes,
        weights,
        biases,
        config: config.clone(),
        n,
    })
}

impl LinearModel {
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn n_features(&self) -> usize {
        self.n
    }

    pub fn config(&self) -> &LinearConfig {
        &self.config
    }

    pub fn weights(&self, class: usize) -> Option<&[f64]> {
        self.weights.get(class).map(Vec::as_slice)
    }

    pub fn bias(&self, class: usize) -> Option<f64> {
        self.biases.get(class).copied()
    }

    /// Per-class margins w.x + b.
    pub fn scores(&self, x: &SparseVector) -> Result<Vec<f64>> {
        if let Some(max) = x.max_index() {
            if max >= self.n {
                return Err(Error::Dimension {
                    index: max,
                    dim: self.n,
                });
            }
        }
        Ok(self
            .weights
            .iter()
            .zip(&self.biases)
            .map(|(w, &b)| dot(w, x) + b)
            .collect())
    }

    pub fn predict(&self, x: &SparseVector) -> Result<usize> {
        Ok(argmax(&self.scores(x)?))
    }

    pub(crate) fn write_class_sections(&self, writer: &mut impl Write) -> Result<()> {
        for (k, label) in self.labels.iter().enumerate() {
            writeln!(writer, "## class\t{label}")?;
            writeln!(writer, "bias={}", self.biases[k])?;
            for (i, &v) in self.weights[k].iter().enumerate() {
                if v != 0.0 {
                    writeln!(writer, "{i}\t{v}")?;
                }
            }
        }
        Ok(())
    }
}

pub(crate) fn load_sections(
    head: &std::collections::HashMap<String, (usize, String)>,
    labels: Vec<String>,
    sections: &[Section],
    n: usize,
) -> Result<LinearModel> {
    let field = |k: &str| -> Result<&(usize, String)> {
        head.get(k)
            .ok_or_else(|| Error::invalid(format!("model header missing {k}")))
    };
    let parse_f64 = |k: &str| -> Result<f64> {
        let (line, v) = field(k)?;
        v.parse()
            .map_err(|_| Error::parse(*line, format!("bad {k} {v:?}")))
    };
    let config = LinearConfig {
        loss: Loss::parse(&field("loss")?.1)?,
        penalty: Penalty::parse(&field("penalty")?.1)?,
        c: parse_f64("c")?,
        eta0: parse_f64("eta0")?,
        epochs: {
            let (line, v) = field("epochs")?;
            v.parse()
                .map_err(|_| Error::parse(*line, format!("bad epochs {v:?}")))?
        },
        seed: {
            let (line, v) = field("seed")?;
            v.parse()
                .map_err(|_| Error::parse(*line, format!("bad seed {v:?}")))?
        },
    };
    if !(config.c > 0.0 && config.c.is_finite()) {
        return Err(Error::invalid(format!("C {} must be positive", config.c)));
    }
    let mut weights = Vec::with_capacity(sections.len());
    let mut biases = Vec::with_capacity(sections.len());
    for section in sections {
        let kv = parse_kv_lines(&section.body)?;
        let (bias_line, bias) = kv
            .get("bias")
            .ok_or_else(|| Error::parse(section.line, "class section missing bias"))?;
        let bias: f64 = bias
            .parse()
            .map_err(|_| Error::parse(*bias_line, format!("bad bias {bias:?}")))?;
        if !bias.is_finite() {
            return Err(Error::parse(*bias_line, "bias must be finite"));
        }
        let rows = parse_rows(&section.body, n)?;
        if rows.iter().any(|&(_, v)| v == 0.0 || !v.is_finite()) {
            return Err(Error::parse(
                section.line,
                "weights must be finite and omitted when zero",
            ));
        }
        let mut dense = vec![0.0f64; n];
        for (i, v) in rows {
            dense[i] = v;
        }
        weights.push(dense);
        biases.push(bias);
    }
    Ok(LinearModel {
        labels,
        weights,
        biases,
        config,
        n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sv(entries: &[(usize, f64)]) -> SparseVector {
        SparseVector::new(entries.to_vec())
    }

    fn labels(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn config(loss: Loss, penalty: Penalty, eta0: f64, epochs: usize) -> LinearConfig {
        LinearConfig {
            loss,
            penalty,
            c: 1.0,
            eta0,
            epochs,
            seed: 42,
        }
    }

    #[test]
    fn pointwise_loss_values() {
        assert_eq!(pointwise_loss(Loss::Logistic, 0.0), (2.0f64).ln());
        assert_eq!(pointwise_loss(Loss::Hinge, 0.0), 1.0);
        assert_eq!(pointwise_loss(Loss::Hinge, 1.0), 0.0);
        assert_eq!(pointwise_loss(Loss::Hinge, 2.0), 0.0);
        assert_eq!(pointwise_loss(Loss::Hinge, -1.5), 2.5);
    }

    #[test]
    fn logistic_loss_is_stable_at_extreme_margins() {
        let lo = pointwise_loss(Loss::Logistic, -1000.0);
        assert!(lo.is_finite());
        assert!((lo - 1000.0).abs() <= 1e-9);
        assert_eq!(pointwise_loss(Loss::Logistic, 1000.0), 0.0);
    }

    #[test]
    fn margin_grad_values() {
        assert_eq!(pointwise_margin_grad(Loss::Logistic, 0.0), -0.5);
        assert!((pointwise_margin_grad(Loss::Logistic, -1000.0) + 1.0).abs() <= 1e-12);
        assert_eq!(pointwise_margin_grad(Loss::Hinge, 0.999), -1.0);
        assert_eq!(pointwise_margin_grad(Loss::Hinge, 1.0), 0.0);
        assert_eq!(pointwise_margin_grad(Loss::Hinge, 1.5), 0.0);
    }

    #[test]
    fn single_epoch_logistic_l2_matches_hand_computation() {
        // two mirrored docs; gradients at zero give gw = -1, gb = 0, so
        // one step lands at w = eta * 0.5 exactly
        let xs = vec![sv(&[(0, 1.0)]), sv(&[(0, -1.0)])];
        let m = train_linear(
            &xs,
            &labels(&["a", "b"]),
            1,
            &config(Loss::Logistic, Penalty::L2, 1.0, 1),
        )
        .unwrap();
        assert_eq!(m.weights(0).unwrap(), [0.5]);
        assert_eq!(m.bias(0).unwrap(), 0.0);
    }

    #[test]
    fn single_epoch_hinge_matches_hand_computation() {
        let xs = vec![sv(&[(0, 1.0)]), sv(&[(0, -1.0)])];
        let m = train_linear(
            &xs,
            &labels(&["a", "b"]),
            1,
            &config(Loss::Hinge, Penalty::L2, 1.0, 1),
        )
        .unwrap();
        assert_eq!(m.weights(0).unwrap(), [1.0]);
        assert_eq!(m.bias(0).unwrap(), 0.0);
    }

    #[test]
    fn l1_prox_produces_exact_zeros() {
        let xs = vec![sv(&[(0, 1.0)]), sv(&[(0, -1.0)])];
        // loss step reaches 0.5; threshold eta/C = 1 swallows it whole
        let m = train_linear(
            &xs,
            &labels(&["a", "b"]),
            1,
            &config(Loss::Logistic, Penalty::L1, 1.0, 1),
        )
        .unwrap();
        assert_eq!(m.weights(0).unwrap(), [0.0]);
        // a looser C only shaves the step
        let loose = LinearConfig {
            c: 10.0,
            ..config(Loss::Logistic, Penalty::L1, 1.0, 1)
        };
        let m = train_linear(&xs, &labels(&["a", "b"]), 1, &loose).unwrap();
        assert_eq!(m.weights(0).unwrap(), [0.4]);
    }

    #[test]
    fn soft_threshold_is_symmetric() {
        assert_eq!(soft_threshold(0.5, 0.2), 0.3);
        assert_eq!(soft_threshold(-0.5, 0.2), -0.3);
        assert_eq!(soft_threshold(0.1, 0.2), 0.0);
        assert_eq!(soft_threshold(-0.1, 0.2), 0.0);
    }

    fn separable_fixture() -> (Vec<SparseVector>, Vec<String>) {
        let xs = vec![
            sv(&[(0, 1.0), (1, 0.5)]),
            sv(&[(0, 0.8)]),
            sv(&[(1, 1.2)]),
            sv(&[(2, 1.0)]),
            sv(&[(2, 0.7), (3, 0.4)]),
            sv(&[(3, 1.1)]),
        ];
        let ys = labels(&["pos", "pos", "pos", "neg", "neg", "neg"]);
        (xs, ys)
    }

    #[test]
    fn separable_toy_reaches_perfect_train_accuracy() {
        let (xs, ys) = separable_fixture();
        for (loss, penalty) in [(Loss::Logistic, Penalty::L2), (Loss::Hinge, Penalty::L1)] {
            let cfg = LinearConfig {
                c: 10.0,
                ..config(loss, penalty, 1.0, 60)
            };
            let m = train_linear(&xs, &ys, 4, &cfg).unwrap();
            for (x, want) in xs.iter().zip(&ys) {
                let got = &m.labels()[m.predict(x).unwrap()];
                assert_eq!(got, want, "{loss:?}/{penalty:?}");
            }
        }
    }

    #[test]
    fn same_seed_gives_bitwise_identical_models() {
        let (xs, ys) = separable_fixture();
        let cfg = config(Loss::Logistic, Penalty::L2, 0.5, 20);
        let a = train_linear(&xs, &ys, 4, &cfg).unwrap();
        let b = train_linear(&xs, &ys, 4, &cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn runaway_steps_are_reported_as_divergence() {
        let (xs, ys) = separable_fixture();
        let cfg = config(Loss::Hinge, Penalty::L2, 1e200, 5);
        match train_linear(&xs, &ys, 4, &cfg) {
            Err(Error::Divergence { epoch, .. }) => assert!(epoch >= 2),
            other => panic!("expected divergence, got {other:?}"),
        }
    }

    #[test]
    fn bias_escapes_regularization() {
        // no features at all: weights cannot move, only the bias can, and
        // even a brutal penalty must not touch it
        let xs = vec![SparseVector::empty(); 4];
        let ys = labels(&["a", "a", "a", "b"]);
        let cfg = LinearConfig {
            c: 1e-6,
            ..config(Loss::Logistic, Penalty::L2, 0.5, 20)
        };
        let m = train_linear(&xs, &ys, 2, &cfg).unwrap();
        assert!(m.weights(0).unwrap().iter().all(|&w| w == 0.0));
        assert!(m.bias(0).unwrap() > 0.1);
        assert!(m.bias(1).unwrap() < -0.1);
    }

    #[test]
    fn input_validation() {
        let xs = vec![sv(&[(0, 1.0)]), sv(&[(1, 1.0)])];
        let ys = labels(&["a", "b"]);
        let base = config(Loss::Logistic, Penalty::L2, 1.0, 5);
        assert!(train_linear(&xs, &ys[..1], 2, &base).is_err());
        assert!(train_linear(&xs, &labels(&["a", "a"]), 2, &base).is_err());
        assert!(train_linear(&xs, &ys, 0, &base).is_err());
        for bad_c in [0.0, -1.0] {
            let cfg = LinearConfig { c: bad_c, ..base.clone() };
            assert!(train_linear(&xs, &ys, 2, &cfg).is_err());
        }
        let cfg = LinearConfig { eta0: 0.0, ..base.clone() };
        assert!(train_linear(&xs, &ys, 2, &cfg).is_err());
        let cfg = LinearConfig { epochs: 0, ..base.clone() };
        assert!(train_linear(&xs, &ys, 2, &cfg).is_err());
        assert!(matches!(
            train_linear(&xs, &ys, 1, &base),
            Err(Error::Dimension { index: 1, dim: 1 })
        ));
    }

    #[test]
    fn scores_check_dimensions() {
        let xs = vec![sv(&[(0, 1.0)]), sv(&[(1, 1.0)])];
        let m = train_linear(
            &xs,
            &labels(&["a", "b"]),
            2,
            &config(Loss::Logistic, Penalty::L2, 1.0, 3),
        )
        .unwrap();
        assert!(matches!(
            m.scores(&sv(&[(7, 1.0)])),
            Err(Error::Dimension { index: 7, dim: 2 })
        ));
    }

    #[test]
    fn loss_and_penalty_names_round_trip() {
        for loss in [Loss::Logistic, Loss::Hinge] {
            assert_eq!(Loss::parse(loss.as_str()).unwrap(), loss);
        }
        for penalty in [Penalty::L2, Penalty::L1] {
            assert_eq!(Penalty::parse(penalty.as_str()).unwrap(), penalty);
        }
        assert!(Loss::parse("huber").is_err());
        assert!(Penalty::parse("elastic").is_err());
    }
}
