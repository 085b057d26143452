/// Sample mean, sample standard deviation and standard error of the mean.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub mean: f64,
    pub std: f64,
    pub se: f64,
    pub count: usize,
}

impl Summary {
    /// Values are summed in slice order, so the result does not depend on
    /// how they were produced.
    pub fn of(values: &[f64]) -> Self {
        let count = values.len();
        if count == 0 {
            return Self {
                mean: f64::NAN,
                std: f64::NAN,
                se: f64::NAN,
                count,
            };
        }
        let n = count as f64;
        let mean = values.iter().sum::<f64>() / n;
        let std = if count > 1 {
            (values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        Self {
            mean,
            std,
            se: std / n.sqrt(),
            count,
        }
    }

    /// Standard error of the difference of two independent means.
    pub fn se_of_difference(&self, other: &Summary) -> f64 {
        (self.se * self.se + other.se * other.se).sqrt()
    }
}
