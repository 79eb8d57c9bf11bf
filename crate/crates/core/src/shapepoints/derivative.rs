use crate::model::Stroke;

use super::ShapeError;

/// Per-sample first differences of X(t) and Y(t) with respect to the
/// sample index.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivativeSeries {
    pub dx: Vec<f64>,
    pub dy: Vec<f64>,
}

impl DerivativeSeries {
    pub fn len(&self) -> usize {
        self.dx.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dx.is_empty()
    }

    pub fn speed(&self, i: usize) -> f64 {
        (self.dx[i] * self.dx[i] + self.dy[i] * self.dy[i]).sqrt()
    }

    pub fn mean_speed(&self) -> f64 {
        (0..self.len()).map(|i| self.speed(i)).sum::<f64>() / self.len() as f64
    }
}

/// Central differences in the interior, one-sided at the two ends.
pub fn differentiate(stroke: &Stroke) -> Result<DerivativeSeries, ShapeError> {
    if stroke.len() < 2 {
        return Err(ShapeError::TooFewSamples(stroke.id()));
    }
    Ok(DerivativeSeries {
        dx: central_difference(&stroke.xs()),
        dy: central_difference(&stroke.ys()),
    })
}

fn central_difference(v: &[f64]) -> Vec<f64> {
    let n = v.len();
    (0..n)
        .map(|i| match i {
            0 => v[1] - v[0],
            i if i == n - 1 => v[n - 1] - v[n - 2],
            i => (v[i + 1] - v[i - 1]) / 2.0,
        })
        .collect()
}
