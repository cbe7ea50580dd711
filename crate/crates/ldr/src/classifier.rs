//! Multiclass linear classifier: multinomial logistic regression fit by
//! full-batch gradient descent with a backtracking line search, behind a
//! small trait so alternates can be plugged in.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::FeatureTable;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Hyperparameters {
    /// L2 strength on the weights (biases unregularized).
    pub l2: f64,
    /// Stop when one step improves the loss by less than this.
    pub tol: f64,
    pub max_iters: usize,
}

impl Default for Hyperparameters {
    fn default() -> Self {
        Hyperparameters { l2: 1.0, tol: 1e-6, max_iters: 1000 }
    }
}

/// Per-feature affine transform fitted on the training rows and replayed
/// identically at prediction time.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Scaling {
    pub mean: Vec<f64>,
    /// Population standard deviation; constant columns store 1.0 so the
    /// transform stays defined.
    pub std: Vec<f64>,
}

impl Scaling {
    fn apply(&self, row: &[f64], out: &mut [f64]) {
        for (j, v) in row.iter().enumerate() {
            out[j] = (v - self.mean[j]) / self.std[j];
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct TrainingMeta {
    /// Identifier of the representation the model was trained on.
    pub representation: String,
    pub hyper: Hyperparameters,
    pub iterations: usize,
    pub final_loss: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LinearModel {
    /// Sorted class list; score vectors follow this order.
    pub classes: Vec<String>,
    pub feature_dim: usize,
    /// Class-major weight matrix, `classes.len() * feature_dim`.
    pub weights: Vec<f64>,
    pub biases: Vec<f64>,
    pub scaling: Scaling,
    pub meta: TrainingMeta,
    /// Loss after each accepted step (index 0 = initial loss); diagnostic
    /// only, not persisted.
    #[serde(skip)]
    pub loss_trace: Vec<f64>,
}

/// Minimal prediction interface; `LinearModel` is the built-in
/// implementation, alternates can slot in behind it.
pub trait Classifier {
    fn classes(&self) -> &[String];
    /// Predicted label plus a probability simplex over `classes()`.
    fn predict(&self, row: &[f64]) -> Result<(String, Vec<f64>)>;
}

impl LinearModel {
    fn class_weights(&self, class: usize) -> &[f64] {
        &self.weights[class * self.feature_dim..(class + 1) * self.feature_dim]
    }

    /// Softmax scores for an already-scaled row.
    fn scores_scaled(&self, scaled: &[f64]) -> Vec<f64> {
        let logits: Vec<f64> = (0..self.classes.len())
            .map(|c| {
                self.biases[c]
                    + self
                        .class_weights(c)
                        .iter()
                        .zip(scaled)
                        .map(|(w, x)| w * x)
                        .sum::<f64>()
            })
            .collect();
        softmax(&logits)
    }

    pub fn predict_batch(&self, table: &FeatureTable) -> Result<Vec<(String, Vec<f64>)>> {
        if table.n_features() != self.feature_dim {
            return Err(Error::DimensionMismatch {
                expected: self.feature_dim,
                got: table.n_features(),
            });
        }
        table
            .rows
            .par_iter()
            .map(|row| Classifier::predict(self, row))
            .collect()
    }

    pub fn predicted_labels(&self, table: &FeatureTable) -> Result<Vec<String>> {
        Ok(self.predict_batch(table)?.into_iter().map(|(label, _)| label).collect())
    }
}

impl Classifier for LinearModel {
    fn classes(&self) -> &[String] {
        &self.classes
    }

    fn predict(&self, row: &[f64]) -> Result<(String, Vec<f64>)> {
        if row.len() != self.feature_dim {
            return Err(Error::DimensionMismatch { expected: self.feature_dim, got: row.len() });
        }
        let mut scaled = vec![0.0; row.len()];
        self.scaling.apply(row, &mut scaled);
        let scores = self.scores_scaled(&scaled);
        // first maximum wins; classes are sorted, so ties resolve to the
        // lexicographically smallest class
        let mut best = 0;
        for (c, s) in scores.iter().enumerate() {
            if *s > scores[best] {
                best = c;
            }
        }
        Ok((self.classes[best].clone(), scores))
    }
}

fn softmax(logits: &[f64]) -> Vec<f64> {
    let m = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logits.iter().map(|z| (z - m).exp()).collect();
    let sum: f64 = exps.iter().sum();
    exps.iter().map(|e| e / sum).collect()
}

/// Row-chunk size for gradient accumulation. Fixed chunking plus in-order
/// reduction keeps training deterministic under any thread count.
const GRAD_CHUNK: usize = 128;

struct Objective<'a> {
    x: &'a [f64], // N x D, scaled
    y: &'a [usize],
    n: usize,
    d: usize,
    c: usize,
    l2: f64,
}

impl Objective<'_> {
    /// Average negative log-likelihood plus the L2 term.
    fn loss(&self, w: &[f64], b: &[f64]) -> f64 {
        let data: f64 = self
            .x
            .par_chunks(GRAD_CHUNK * self.d)
            .zip(self.y.par_chunks(GRAD_CHUNK))
            .map(|(xs, ys)| {
                let mut nll = 0.0;
                for (row, &label) in xs.chunks(self.d).zip(ys) {
                    let mut logits = vec![0.0f64; self.c];
                    for (class, logit) in logits.iter_mut().enumerate() {
                        let wc = &w[class * self.d..(class + 1) * self.d];
                        *logit = b[class] + dot(wc, row);
                    }
                    nll += log_sum_exp(&logits) - logits[label];
                }
                nll
            })
            .collect::<Vec<f64>>()
            .into_iter()
            .sum();
        let reg: f64 = w.iter().map(|v| v * v).sum::<f64>();
        data / self.n as f64 + self.l2 * reg / (2.0 * self.n as f64)
    }

    /// Loss plus gradients with respect to weights and biases.
    fn loss_and_grad(&self, w: &[f64], b: &[f64]) -> (f64, Vec<f64>, Vec<f64>) {
        let parts: Vec<(f64, Vec<f64>, Vec<f64>)> = self
            .x
            .par_chunks(GRAD_CHUNK * self.d)
            .zip(self.y.par_chunks(GRAD_CHUNK))
            .map(|(xs, ys)| {
                let mut nll = 0.0;
                let mut gw = vec![0.0f64; self.c * self.d];
                let mut gb = vec![0.0f64; self.c];
                let mut logits = vec![0.0f64; self.c];
                for (row, &label) in xs.chunks(self.d).zip(ys) {
                    for (class, logit) in logits.iter_mut().enumerate() {
                        let wc = &w[class * self.d..(class + 1) * self.d];
                        *logit = b[class] + dot(wc, row);
                    }
                    let lse = log_sum_exp(&logits);
                    nll += lse - logits[label];
                    for class in 0..self.c {
                        let mut p = (logits[class] - lse).exp();
                        if class == label {
                            p -= 1.0;
                        }
                        gb[class] += p;
                        let gwc = &mut gw[class * self.d..(class + 1) * self.d];
                        for (g, x) in gwc.iter_mut().zip(row) {
                            *g += p * x;
                        }
                    }
                }
                (nll, gw, gb)
            })
            .collect();
        let n = self.n as f64;
        let mut nll = 0.0;
        let mut gw = vec![0.0f64; self.c * self.d];
        let mut gb = vec![0.0f64; self.c];
        for (part_nll, part_gw, part_gb) in parts {
            nll += part_nll;
            for (a, v) in gw.iter_mut().zip(part_gw) {
                *a += v;
            }
            for (a, v) in gb.iter_mut().zip(part_gb) {
                *a += v;
            }
        }
        let mut loss = nll / n;
        for (g, v) in gw.iter_mut().zip(w) {
            *g = *g / n + self.l2 * v / n;
            loss += self.l2 * v * v / (2.0 * n);
        }
        for g in gb.iter_mut() {
            *g /= n;
        }
        (loss, gw, gb)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn log_sum_exp(logits: &[f64]) -> f64 {
    let m = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    m + logits.iter().map(|z| (z - m).exp()).sum::<f64>().ln()
}

/// Fit a multinomial logistic model on the table's rows against the given
/// gold labels. Classes are the sorted distinct labels. Deterministic:
/// zero initialization, fixed chunked reductions, no randomness.
pub fn train_classifier(
    features: &FeatureTable,
    labels: &[String],
    hyper: &Hyperparameters,
) -> Result<LinearModel> {
    let n = features.n_rows();
    if labels.len() != n {
        return Err(Error::LabelMismatch { rows: n, labels: labels.len() });
    }
    let mut classes: Vec<String> = labels.to_vec();
    classes.sort();
    classes.dedup();
    if classes.len() < 2 {
        return Err(Error::SingleClass(classes.len()));
    }
    let d = features.n_features();
    for (i, row) in features.rows.iter().enumerate() {
        if row.len() != d {
            return Err(Error::DimensionMismatch { expected: d, got: row.len() });
        }
        for (j, v) in row.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFiniteFeature { row: i, column: j });
            }
        }
    }
    let y: Vec<usize> = labels
        .iter()
        .map(|label| classes.binary_search(label).expect("label in classes"))
        .collect();

    // standardize on the training rows
    let mut mean = vec![0.0f64; d];
    for row in &features.rows {
        for (m, v) in mean.iter_mut().zip(row) {
            *m += v;
        }
    }
    for m in mean.iter_mut() {
        *m /= n as f64;
    }
    let mut var = vec![0.0f64; d];
    for row in &features.rows {
        for (j, v) in row.iter().enumerate() {
            let diff = v - mean[j];
            var[j] += diff * diff;
        }
    }
    let std: Vec<f64> = var
        .iter()
        .map(|v| {
            let s = (v / n as f64).sqrt();
            if s > 0.0 {
                s
            } else {
                1.0
            }
        })
        .collect();
    let scaling = Scaling { mean, std };
    let mut x = vec![0.0f64; n * d];
    for (i, row) in features.rows.iter().enumerate() {
        scaling.apply(row, &mut x[i * d..(i + 1) * d]);
    }

    let c = classes.len();
    let objective = Objective { x: &x, y: &y, n, d, c, l2: hyper.l2 };
    let mut w = vec![0.0f64; c * d];
    let mut b = vec![0.0f64; c];
    let mut loss_trace = Vec::with_capacity(hyper.max_iters + 1);
    let mut step = 1.0f64;
    let mut iterations = 0;
    let (mut loss, mut gw, mut gb) = objective.loss_and_grad(&w, &b);
    loss_trace.push(loss);
    for _ in 0..hyper.max_iters {
        let grad_norm2: f64 =
            gw.iter().map(|g| g * g).sum::<f64>() + gb.iter().map(|g| g * g).sum::<f64>();
        if grad_norm2 == 0.0 {
            break;
        }
        // backtracking (Armijo) line search: shrink until the step gives a
        // sufficient decrease, so the recorded loss never increases
        step = (step * 2.0).min(64.0);
        let mut accepted = None;
        for _ in 0..40 {
            let wt: Vec<f64> = w.iter().zip(&gw).map(|(v, g)| v - step * g).collect();
            let bt: Vec<f64> = b.iter().zip(&gb).map(|(v, g)| v - step * g).collect();
            let trial = objective.loss(&wt, &bt);
            if trial <= loss - 1e-4 * step * grad_norm2 {
                accepted = Some((wt, bt, trial));
                break;
            }
            step *= 0.5;
        }
        let Some((wt, bt, trial)) = accepted else {
            break; // no descent step representable; numerically converged
        };
        w = wt;
        b = bt;
        iterations += 1;
        let improvement = loss - trial;
        loss = trial;
        loss_trace.push(loss);
        if improvement < hyper.tol {
            break;
        }
        let next = objective.loss_and_grad(&w, &b);
        loss = next.0;
        gw = next.1;
        gb = next.2;
    }

    Ok(LinearModel {
        classes,
        feature_dim: d,
        weights: w,
        biases: b,
        scaling,
        meta: TrainingMeta {
            representation: String::new(),
            hyper: hyper.clone(),
            iterations,
            final_loss: loss,
        },
        loss_trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(rows: Vec<Vec<f64>>) -> FeatureTable {
        let d = rows.first().map_or(0, |r| r.len());
        FeatureTable {
            feature_names: (0..d).map(|i| format!("f{i}")).collect(),
            doc_ids: (0..rows.len()).map(|i| format!("d{i}")).collect(),
            labels: vec![None; rows.len()],
            rows,
        }
    }

    fn labels(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn separable_two_class_toy_reaches_perfect_training_accuracy() {
        let rows = vec![
            vec![0.0, 0.1],
            vec![0.2, 0.0],
            vec![0.1, 0.1],
            vec![1.0, 0.9],
            vec![0.9, 1.1],
            vec![1.1, 1.0],
        ];
        let gold = labels(&["neg", "neg", "neg", "pos", "pos", "pos"]);
        let t = table(rows.clone());
        let model = train_classifier(&t, &gold, &Hyperparameters::default()).unwrap();
        for (row, want) in rows.iter().zip(&gold) {
            let (got, scores) = model.predict(row).unwrap();
            assert_eq!(&got, want);
            assert!((scores.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn identical_rows_predict_majority_class() {
        let rows = vec![vec![3.0, 7.0]; 5];
        let gold = labels(&["a", "b", "b", "b", "a"]);
        let model = train_classifier(&table(rows), &gold, &Hyperparameters::default()).unwrap();
        for probe in [vec![3.0, 7.0], vec![0.0, 0.0], vec![100.0, -5.0]] {
            let (label, _) = model.predict(&probe).unwrap();
            assert_eq!(label, "b");
        }
    }

    #[test]
    fn zero_weight_model_gives_uniform_scores_and_first_class() {
        let model = LinearModel {
            classes: labels(&["aa", "bb", "cc"]),
            feature_dim: 2,
            weights: vec![0.0; 6],
            biases: vec![0.0; 3],
            scaling: Scaling { mean: vec![0.0, 0.0], std: vec![1.0, 1.0] },
            meta: TrainingMeta::default(),
            loss_trace: Vec::new(),
        };
        let (label, scores) = model.predict(&[1.0, 2.0]).unwrap();
        assert_eq!(label, "aa"); // ties resolve to the lexicographically first class
        for s in &scores {
            assert!((s - 1.0 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn validation_errors() {
        let t = table(vec![vec![1.0], vec![2.0]]);
        let err = train_classifier(&t, &labels(&["a"]), &Hyperparameters::default()).unwrap_err();
        assert!(matches!(err, Error::LabelMismatch { rows: 2, labels: 1 }));
        let err = train_classifier(&t, &labels(&["a", "a"]), &Hyperparameters::default()).unwrap_err();
        assert!(matches!(err, Error::SingleClass(1)));
        let bad = table(vec![vec![1.0], vec![f64::NAN]]);
        let err = train_classifier(&bad, &labels(&["a", "b"]), &Hyperparameters::default()).unwrap_err();
        assert!(matches!(err, Error::NonFiniteFeature { row: 1, column: 0 }));
    }

    #[test]
    fn predict_rejects_wrong_dimension() {
        let t = table(vec![vec![0.0, 0.0], vec![1.0, 1.0]]);
        let model = train_classifier(&t, &labels(&["a", "b"]), &Hyperparameters::default()).unwrap();
        let err = model.predict(&[1.0, 2.0, 3.0]).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { expected: 2, got: 3 }));
    }

    #[test]
    fn loss_trace_is_monotone_nonincreasing() {
        let rows = vec![
            vec![0.0, 0.3, 1.0],
            vec![0.1, 0.2, 0.8],
            vec![1.0, 0.8, 0.1],
            vec![0.9, 1.0, 0.0],
            vec![0.5, 0.5, 0.5],
            vec![0.4, 0.6, 0.55],
        ];
        let gold = labels(&["a", "a", "b", "b", "c", "c"]);
        let model = train_classifier(&table(rows), &gold, &Hyperparameters::default()).unwrap();
        assert!(model.loss_trace.len() >= 2);
        for pair in model.loss_trace.windows(2) {
            assert!(pair[1] <= pair[0] + 1e-15, "loss increased: {} -> {}", pair[0], pair[1]);
        }
    }

    #[test]
    fn training_is_deterministic() {
        let rows = vec![
            vec![0.0, 0.3],
            vec![0.1, 0.2],
            vec![1.0, 0.8],
            vec![0.9, 1.0],
        ];
        let gold = labels(&["a", "a", "b", "b"]);
        let m1 = train_classifier(&table(rows.clone()), &gold, &Hyperparameters::default()).unwrap();
        let m2 = train_classifier(&table(rows), &gold, &Hyperparameters::default()).unwrap();
        assert_eq!(serde_json::to_string(&m1).unwrap(), serde_json::to_string(&m2).unwrap());
    }

    #[test]
    fn affine_rescaling_of_a_raw_column_keeps_predictions() {
        let rows = vec![
            vec![0.0, 5.0],
            vec![0.2, 6.0],
            vec![1.0, 5.5],
            vec![0.8, 7.0],
            vec![0.4, 9.0],
            vec![0.6, 8.0],
        ];
        let gold = labels(&["a", "a", "b", "b", "a", "b"]);
        let tests = vec![vec![0.3, 6.5], vec![0.7, 8.5], vec![0.5, 5.2]];
        let m1 = train_classifier(&table(rows.clone()), &gold, &Hyperparameters::default()).unwrap();
        let base: Vec<String> =
            tests.iter().map(|r| m1.predict(r).unwrap().0).collect();
        // scale+shift column 1 uniformly across train and test
        let transform = |r: &Vec<f64>| vec![r[0], 3.0 * r[1] - 10.0];
        let m2 = train_classifier(
            &table(rows.iter().map(transform).collect()),
            &gold,
            &Hyperparameters::default(),
        )
        .unwrap();
        let moved: Vec<String> = tests
            .iter()
            .map(|r| m2.predict(&transform(r)).unwrap().0)
            .collect();
        assert_eq!(base, moved);
    }

    #[test]
    fn scores_are_a_simplex_on_random_rows() {
        use rand::{Rng, SeedableRng};
        let rows = vec![
            vec![0.0, 0.3, 1.0],
            vec![1.0, 0.8, 0.1],
            vec![0.5, 0.5, 0.5],
            vec![0.2, 0.9, 0.7],
        ];
        let gold = labels(&["a", "b", "c", "a"]);
        let model = train_classifier(&table(rows), &gold, &Hyperparameters::default()).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let row: Vec<f64> = (0..3).map(|_| rng.gen_range(-50.0..50.0)).collect();
            let (_, scores) = model.predict(&row).unwrap();
            assert!((scores.iter().sum::<f64>() - 1.0).abs() < 1e-9);
            assert!(scores.iter().all(|s| *s >= 0.0));
        }
    }
}
