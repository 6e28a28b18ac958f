use std::fmt::Write as _;

use crate::error::{HdgError, Result};
use crate::fe::basis::dim_pk;

/// Discrete fields `(q_h, u_h, uhat_h)` and the optional post-processed
/// `u*_h`, stored as coefficient blocks in the orthonormal bases.
#[derive(Debug, Clone, PartialEq)]
pub struct HdgState {
    pub k: usize,
    pub tau: f64,
    /// `2 dim P_k` per element, `[x | y]`.
    pub q: Vec<f64>,
    /// `dim P_k` per element.
    pub u: Vec<f64>,
    /// `k + 1` per face.
    pub uhat: Vec<f64>,
    /// `dim P_{k+1}` per element.
    pub ustar: Option<Vec<f64>>,
}

impl HdgState {
    pub fn zeros(k: usize, tau: f64, n_elements: usize, n_faces: usize) -> Self {
        let n = dim_pk(k);
        Self {
            k,
            tau,
            q: vec![0.0; 2 * n * n_elements],
            u: vec![0.0; n * n_elements],
            uhat: vec![0.0; (k + 1) * n_faces],
            ustar: None,
        }
    }

    pub fn n_local(&self) -> usize {
        dim_pk(self.k)
    }

    pub fn n_elements(&self) -> usize {
        self.u.len() / self.n_local()
    }

    pub fn n_faces(&self) -> usize {
        self.uhat.len() / (self.k + 1)
    }

    pub fn q_elem(&self, e: usize) -> &[f64] {
        let n = self.n_local();
        &self.q[2 * n * e..2 * n * (e + 1)]
    }

    pub fn u_elem(&self, e: usize) -> &[f64] {
        let n = self.n_local();
        &self.u[n * e..n * (e + 1)]
    }

    pub fn uhat_face(&self, f: usize) -> &[f64] {
        let nf = self.k + 1;
        &self.uhat[nf * f..nf * (f + 1)]
    }

    pub fn ustar_elem(&self, e: usize) -> Option<&[f64]> {
        let m = dim_pk(self.k + 1);
        self.ustar.as_ref().map(|s| &s[m * e..m * (e + 1)])
    }

    /// Plain-text serialization with round-trip float formatting.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "hdgstate 1");
        let _ = writeln!(s, "{} {:e}", self.k, self.tau);
        let mut block = |name: &str, v: &[f64]| {
            let _ = write!(s, "{name} {}", v.len());
            for x in v {
                let _ = write!(s, " {x:e}");
            }
            s.push('\n');
        };
        block("q", &self.q);
        block("u", &self.u);
        block("uhat", &self.uhat);
        if let Some(us) = &self.ustar {
            block("ustar", us);
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let bad = |m: &str| HdgError::Config(format!("state file: {m}"));
        let mut lines = text.lines();
        if lines.next().map(str::trim) != Some("hdgstate 1") {
            return Err(bad("missing header"));
        }
        let head: Vec<&str> = lines.next().ok_or_else(|| bad("missing degree"))?.split_whitespace().collect();
        let k = head.first().and_then(|v| v.parse().ok()).ok_or_else(|| bad("degree"))?;
        let tau = head.get(1).and_then(|v| v.parse().ok()).ok_or_else(|| bad("tau"))?;
        let mut st = HdgState {
            k,
            tau,
            q: vec![],
            u: vec![],
            uhat: vec![],
            ustar: None,
        };
        for line in lines.filter(|l| !l.trim().is_empty()) {
            let mut it = line.split_whitespace();
            let name = it.next().unwrap_or_default();
            let len: usize = it.next().and_then(|v| v.parse().ok()).ok_or_else(|| bad("block length"))?;
            let vals = it
                .map(|v| v.parse::<f64>().map_err(|_| bad("number")))
                .collect::<Result<Vec<_>>>()?;
            if vals.len() != len {
                return Err(bad("block length mismatch"));
            }
            match name {
                "q" => st.q = vals,
                "u" => st.u = vals,
                "uhat" => st.uhat = vals,
                "ustar" => st.ustar = Some(vals),
                other => return Err(bad(&format!("unknown block {other}"))),
            }
        }
        Ok(st)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip_is_exact() {
        let mut s = HdgState::zeros(2, 1.0, 3, 5);
        for (i, v) in s.q.iter_mut().enumerate() {
            *v = (i as f64 * 0.37).sin() / 3.0;
        }
        s.u[4] = 1e-300;
        s.uhat[2] = -std::f64::consts::PI;
        s.ustar = Some(vec![0.1; 30]);
        let back = HdgState::from_text(&s.to_text()).unwrap();
        assert_eq!(back, s);
        assert_eq!(back.n_elements(), 3);
        assert_eq!(back.n_faces(), 5);
    }
}
