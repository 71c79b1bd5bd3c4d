use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::objective::{BatchToken, Objective, ObjectiveEvaluation};
use crate::rng::RngStream;
use crate::vector::ParamVector;

/// Binary classification on two Gaussian blobs with a logistic model.
///
/// Parameters are `n_features` weights followed by a bias. The dataset and
/// the batch order are fixed at construction; token `t` selects batch
/// `t mod n_batches` of the shuffled samples.
#[derive(Debug, Clone)]
pub struct SyntheticClassification {
    n_features: usize,
    batch_size: usize,
    features: Vec<f64>,
    labels: Vec<f64>,
    order: Vec<usize>,
    seed: u64,
}

impl SyntheticClassification {
    pub const DEFAULT_SAMPLES: usize = 1024;

    /// Blobs centred at `+-separation / 2` along every axis with unit variance.
    pub fn new(
        n_features: usize,
        n_samples: usize,
        separation: f64,
        batch_size: usize,
        seed: u64,
    ) -> Result<Self> {
        if n_features == 0 {
            return Err(Error::EmptyVector);
        }
        if n_samples < 2 || batch_size == 0 || batch_size > n_samples {
            return Err(Error::Parameter(format!(
                "need 2 <= n_samples and 0 < batch_size <= n_samples, got {n_samples} and {batch_size}"
            )));
        }
        if !separation.is_finite() {
            return Err(Error::Parameter("separation must be finite".into()));
        }
        let mut rng = RngStream::new(seed);
        let mut features = Vec::with_capacity(n_samples * n_features);
        let mut labels = Vec::with_capacity(n_samples);
        for k in 0..n_samples {
            let label = (k % 2) as f64;
            let centre = (label - 0.5) * separation;
            features.extend((0..n_features).map(|_| centre + rng.standard_normal()));
            labels.push(label);
        }
        let mut order: Vec<usize> = (0..n_samples).collect();
        order.shuffle(&mut rng);
        Ok(Self {
            n_features,
            batch_size,
            features,
            labels,
            order,
            seed,
        })
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn n_samples(&self) -> usize {
        self.labels.len()
    }

    pub fn batch_size(&self) -> usize {
        self.batch_size
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Full batches only; a trailing remainder is never selected by a token.
    pub fn n_batches(&self) -> usize {
        self.n_samples() / self.batch_size
    }

    /// Sample indices selected by `batch`; `None` means the whole dataset.
    pub fn batch_indices(&self, batch: Option<BatchToken>) -> &[usize] {
        match batch {
            None => &self.order,
            Some(BatchToken(t)) => {
                let b = (t % self.n_batches() as u64) as usize;
                &self.order[b * self.batch_size..(b + 1) * self.batch_size]
            }
        }
    }

    fn row(&self, i: usize) -> &[f64] {
        &self.features[i * self.n_features..(i + 1) * self.n_features]
    }

    fn loss_on(&self, theta: &ParamVector, indices: &[usize]) -> Result<ObjectiveEvaluation> {
        if indices.is_empty() {
            return Err(Error::Parameter("empty batch".into()));
        }
        let d = self.n_features;
        let w = &theta.as_slice()[..d];
        let bias = theta[d];
        let mut loss = 0.0;
        let mut grad = vec![0.0; d + 1];
        for &i in indices {
            let x = self.row(i);
            let y = self.labels[i];
            let z: f64 = x.iter().zip(w).map(|(a, b)| a * b).sum::<f64>() + bias;
            // log(1 + e^z) - y z, written to avoid overflow
            loss += z.max(0.0) + (-z.abs()).exp().ln_1p() - y * z;
            let residual = sigmoid(z) - y;
            for (g, xi) in grad.iter_mut().zip(x) {
                *g += residual * xi;
            }
            grad[d] += residual;
        }
        let m = indices.len() as f64;
        grad.iter_mut().for_each(|g| *g /= m);
        Ok(ObjectiveEvaluation {
            value: loss / m,
            gradient: ParamVector::from_vec_unchecked(grad),
        })
    }
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// Mean cross-entropy over the batch selected by `batch`.
pub fn logistic_objective(
    problem: &SyntheticClassification,
    theta: &ParamVector,
    batch: Option<BatchToken>,
) -> Result<ObjectiveEvaluation> {
    problem.check_input(theta)?;
    problem.loss_on(theta, problem.batch_indices(batch))
}

impl Objective for SyntheticClassification {
    fn dimension(&self) -> usize {
        self.n_features + 1
    }

    fn evaluate(
        &self,
        theta: &ParamVector,
        batch: Option<BatchToken>,
    ) -> Result<ObjectiveEvaluation> {
        logistic_objective(self, theta, batch)
    }
}
