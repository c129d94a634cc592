use std::io::Read;
use std::path::Path;

use crate::constants::EV_TO_RAD_PER_S;

use super::DielectricError;

/// Tabulated `Im ε(ω)` samples on a strictly increasing frequency grid (rad/s).
#[derive(Debug, Clone, PartialEq)]
pub struct OpticalDataTable {
    omega: Vec<f64>,
    im_eps: Vec<f64>,
}

impl OpticalDataTable {
    pub fn new(omega: Vec<f64>, im_eps: Vec<f64>) -> Result<Self, DielectricError> {
        if omega.len() < 2 {
            return Err(DielectricError::InvalidTable("at least two samples are required".into()));
        }
        if omega.len() != im_eps.len() {
            return Err(DielectricError::InvalidTable(format!(
                "{} frequencies but {} values",
                omega.len(),
                im_eps.len()
            )));
        }
        if !(omega[0] > 0.0) {
            return Err(DielectricError::InvalidTable(format!(
                "first frequency must be positive, got {}",
                omega[0]
            )));
        }
        for (i, w) in omega.windows(2).enumerate() {
            if !(w[1] > w[0]) || !w[1].is_finite() {
                return Err(DielectricError::InvalidTable(format!(
                    "frequencies must be strictly increasing (sample {})",
                    i + 1
                )));
            }
        }
        if let Some(i) = im_eps.iter().position(|v| !(*v >= 0.0) || !v.is_finite()) {
            return Err(DielectricError::InvalidTable(format!(
                "Im eps must be finite and non-negative (sample {i}, value {})",
                im_eps[i]
            )));
        }
        Ok(Self { omega, im_eps })
    }

    /// Samples `f` at the given frequencies.
    pub fn sample<F: FnMut(f64) -> f64>(omega: Vec<f64>, mut f: F) -> Result<Self, DielectricError> {
        let im_eps = omega.iter().map(|&w| f(w)).collect();
        Self::new(omega, im_eps)
    }

    /// Parses `omega_eV,n,kappa` CSV; `Im ε = 2nκ`. Lines starting with `#` are skipped.
    pub fn from_nk_csv<R: Read>(reader: R) -> Result<Self, DielectricError> {
        let mut rdr = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(reader);
        let headers = rdr.headers()?.clone();
        let expected = ["omega_eV", "n", "kappa"];
        if headers.len() != 3 || headers.iter().zip(expected).any(|(h, e)| h != e) {
            return Err(DielectricError::InvalidTable(format!(
                "expected header omega_eV,n,kappa, found {}",
                headers.iter().collect::<Vec<_>>().join(",")
            )));
        }

        let mut omega = Vec::new();
        let mut im_eps = Vec::new();
        for record in rdr.records() {
            let record = record?;
            let line = record.position().map_or(0, |p| p.line());
            let field = |i: usize| -> Result<f64, DielectricError> {
                let raw = record.get(i).unwrap_or("");
                raw.parse::<f64>().map_err(|_| DielectricError::TableLine {
                    line,
                    message: format!("cannot parse {} value {raw:?}", expected[i]),
                })
            };
            let (ev, n, kappa) = (field(0)?, field(1)?, field(2)?);
            if !(ev > 0.0) {
                return Err(DielectricError::TableLine {
                    line,
                    message: format!("photon energy must be positive, got {ev}"),
                });
            }
            if !(n >= 0.0 && kappa >= 0.0) {
                return Err(DielectricError::TableLine {
                    line,
                    message: format!("n and kappa must be non-negative, got {n}, {kappa}"),
                });
            }
            if let Some(&prev) = omega.last() {
                if !(ev * EV_TO_RAD_PER_S > prev) {
                    return Err(DielectricError::TableLine {
                        line,
                        message: "photon energies must be strictly increasing".into(),
                    });
                }
            }
            omega.push(ev * EV_TO_RAD_PER_S);
            im_eps.push(2.0 * n * kappa);
        }
        Self::new(omega, im_eps)
    }

    pub fn from_nk_file(path: &Path) -> Result<Self, DielectricError> {
        let file = std::fs::File::open(path).map_err(|source| DielectricError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_nk_csv(file).map_err(|e| match e {
            DielectricError::TableLine { line, message } => DielectricError::InvalidTable(format!(
                "{}:{line}: {message}",
                path.display()
            )),
            other => other,
        })
    }

    pub fn omega(&self) -> &[f64] {
        &self.omega
    }

    pub fn im_eps(&self) -> &[f64] {
        &self.im_eps
    }

    pub fn omega_min(&self) -> f64 {
        self.omega[0]
    }

    pub fn omega_max(&self) -> f64 {
        self.omega[self.omega.len() - 1]
    }

    pub fn len(&self) -> usize {
        self.omega.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega.is_empty()
    }

    /// Copy with every `Im ε` multiplied by `s ≥ 0`.
    pub fn scaled(&self, s: f64) -> Result<Self, DielectricError> {
        Self::new(self.omega.clone(), self.im_eps.iter().map(|v| v * s).collect())
    }

    /// Interpolated `Im ε` inside the table: log-log linear, or linear when a
    /// neighbouring sample is zero. `None` outside `[omega_min, omega_max]`.
    pub fn interpolate(&self, omega: f64) -> Option<f64> {
        if !(omega >= self.omega_min() && omega <= self.omega_max()) {
            return None;
        }
        let k = match self.omega.binary_search_by(|v| v.total_cmp(&omega)) {
            Ok(i) => return Some(self.im_eps[i]),
            Err(i) => i - 1,
        };
        Some(self.segment_value(k, omega))
    }

    pub(crate) fn segment_value(&self, k: usize, omega: f64) -> f64 {
        let (w0, w1) = (self.omega[k], self.omega[k + 1]);
        let (v0, v1) = (self.im_eps[k], self.im_eps[k + 1]);
        if v0 > 0.0 && v1 > 0.0 {
            let slope = (v1 / v0).ln() / (w1 / w0).ln();
            v0 * (omega / w0).powf(slope)
        } else {
            v0 + (v1 - v0) * (omega - w0) / (w1 - w0)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "# gold, test values\nomega_eV,n,kappa\n0.5, 1.0, 2.0\n1.0,0.5,1.0\n# trailing\n2.0,0.25,0.5\n";

    #[test]
    fn parses_nk_csv() {
        let t = OpticalDataTable::from_nk_csv(SAMPLE.as_bytes()).unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(t.im_eps(), &[4.0, 1.0, 0.25]);
        assert!((t.omega_min() - 0.5 * EV_TO_RAD_PER_S).abs() < 1.0);
    }

    #[test]
    fn csv_errors_carry_line_numbers() {
        let bad = "omega_eV,n,kappa\n1.0,1,1\n0.5,1,1\n";
        match OpticalDataTable::from_nk_csv(bad.as_bytes()) {
            Err(DielectricError::TableLine { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        let bad = "omega_eV,n,kappa\n1.0,x,1\n";
        assert!(matches!(
            OpticalDataTable::from_nk_csv(bad.as_bytes()),
            Err(DielectricError::TableLine { line: 2, .. })
        ));
        let wrong_header = "energy,n,k\n1,1,1\n2,1,1\n";
        assert!(OpticalDataTable::from_nk_csv(wrong_header.as_bytes()).is_err());
    }

    #[test]
    fn interpolation_is_power_law_between_samples() {
        let t = OpticalDataTable::new(vec![1.0, 4.0], vec![16.0, 1.0]).unwrap();
        // Im ∝ ω⁻² on this segment
        assert!((t.interpolate(2.0).unwrap() - 4.0).abs() < 1e-12);
        assert_eq!(t.interpolate(5.0), None);
        let z = OpticalDataTable::new(vec![1.0, 3.0], vec![0.0, 2.0]).unwrap();
        assert!((z.interpolate(2.0).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_invalid_samples() {
        assert!(OpticalDataTable::new(vec![1.0, 1.0], vec![0.0, 0.0]).is_err());
        assert!(OpticalDataTable::new(vec![0.0, 1.0], vec![0.0, 0.0]).is_err());
        assert!(OpticalDataTable::new(vec![1.0, 2.0], vec![-1.0, 0.0]).is_err());
    }
}
