//! External formats: state JSON and CSV series.
//!
//! States serialize as `{"L": .., "K_max": .., "u_hat": [[re, im], ..], "v_hat": [..]}`
//! with coefficients ordered `k = -K_max ..= K_max`. CSV columns carry full
//! double precision (17 significant digits).

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::decay::CounterexampleCertificate;
use crate::energy::EnergyRecord;
use crate::error::{Error, Result};
use crate::state::{GridField, ModeVector, SpectralState};

/// Formats with 17 significant digits (lossless for `f64`).
pub fn fmt_full(x: f64) -> String {
    format!("{x:.16e}")
}

/// JSON image of a [`SpectralState`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateJson {
    #[serde(rename = "L")]
    pub l: f64,
    #[serde(rename = "K_max")]
    pub k_max: usize,
    pub u_hat: Vec<[f64; 2]>,
    pub v_hat: Vec<[f64; 2]>,
}

impl From<&SpectralState<f64>> for StateJson {
    fn from(state: &SpectralState<f64>) -> Self {
        let pack = |m: &ModeVector<f64>| m.coeffs().iter().map(|c| [c.re, c.im]).collect();
        StateJson {
            l: state.l(),
            k_max: state.k_max(),
            u_hat: pack(state.u()),
            v_hat: pack(state.v()),
        }
    }
}

impl StateJson {
    pub fn into_state(self) -> Result<SpectralState<f64>> {
        let unpack = |raw: Vec<[f64; 2]>, k_max: usize| -> Result<ModeVector<f64>> {
            ModeVector::new(
                k_max,
                raw.into_iter()
                    .map(|[re, im]| Complex::new(re, im))
                    .collect(),
            )
        };
        let u = unpack(self.u_hat, self.k_max)?;
        let v = unpack(self.v_hat, self.k_max)?;
        SpectralState::new(self.l, u, v)
    }
}

pub fn state_to_json(state: &SpectralState<f64>) -> String {
    serde_json::to_string_pretty(&StateJson::from(state)).expect("state serialization")
}

pub fn state_from_json(text: &str) -> Result<SpectralState<f64>> {
    let raw: StateJson =
        serde_json::from_str(text).map_err(|e| Error::Config(format!("state file: {e}")))?;
    raw.into_state()
}

/// Grid CSV with header `x,u` (or `x,u,v` when a velocity field is given).
pub fn grid_csv(u: &GridField<f64>, v: Option<&GridField<f64>>) -> Result<String> {
    if let Some(vf) = v {
        if vf.len() != u.len() || vf.l() != u.l() {
            return Err(Error::DimensionMismatch(
                "velocity grid differs from displacement grid".into(),
            ));
        }
    }
    let mut out = String::from(if v.is_some() { "x,u,v\n" } else { "x,u\n" });
    for j in 0..u.len() {
        out.push_str(&fmt_full(u.x(j)));
        out.push(',');
        out.push_str(&fmt_full(u.samples()[j]));
        if let Some(vf) = v {
            out.push(',');
            out.push_str(&fmt_full(vf.samples()[j]));
        }
        out.push('\n');
    }
    Ok(out)
}

/// Energy ledger CSV with header `t,kinetic,potential,total,dissipated,residual`.
pub fn ledger_csv(records: &[EnergyRecord<f64>]) -> String {
    let mut out = String::from("t,kinetic,potential,total,dissipated,residual\n");
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            fmt_full(r.t),
            fmt_full(r.kinetic),
            fmt_full(r.potential),
            fmt_full(r.total),
            fmt_full(r.dissipated),
            fmt_full(r.residual)
        ));
    }
    out
}

/// Two-column CSV with the given header line (no trailing newline in `header`).
pub fn series_csv(header: &str, series: &[(f64, f64)]) -> String {
    let mut out = format!("{header}\n");
    for &(t, v) in series {
        out.push_str(&format!("{},{}\n", fmt_full(t), fmt_full(v)));
    }
    out
}

/// Witness margins CSV with header `n,t_n,lhs,rhs,margin`.
pub fn margins_csv(cert: &CounterexampleCertificate<f64>) -> String {
    let mut out = String::from("n,t_n,lhs,rhs,margin\n");
    for s in &cert.margins {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            s.n,
            fmt_full(s.t),
            fmt_full(s.lhs),
            fmt_full(s.rhs),
            fmt_full(s.margin)
        ));
    }
    out
}

/// Mode series CSV for the critical-mode scenario:
/// header `t,u1_re,u1_im,dist_h1_sq`.
pub fn example33_csv(bundle: &crate::scenario::Example33Bundle<f64>) -> String {
    let mut out = String::from("t,u1_re,u1_im,dist_h1_sq\n");
    for (i, &t) in bundle.times.iter().enumerate() {
        out.push_str(&format!(
            "{},{},{},{}\n",
            fmt_full(t),
            fmt_full(bundle.mode_value[i].re),
            fmt_full(bundle.mode_value[i].im),
            fmt_full(bundle.distance_h1_sq[i])
        ));
    }
    out
}

#[derive(Serialize)]
struct MarginJson {
    n: u64,
    t: f64,
    lhs: f64,
    rhs: f64,
    margin: f64,
}

#[derive(Serialize)]
struct CertificateJson {
    k0: i64,
    gamma: f64,
    #[serde(rename = "M")]
    m: f64,
    phi_k0: f64,
    n0: u64,
    initial: StateJson,
    margins: Vec<MarginJson>,
}

pub fn certificate_to_json(cert: &CounterexampleCertificate<f64>) -> String {
    let doc = CertificateJson {
        k0: cert.k0,
        gamma: cert.gamma,
        m: cert.m,
        phi_k0: cert.phi_k0,
        n0: cert.n0,
        initial: StateJson::from(&cert.initial),
        margins: cert
            .margins
            .iter()
            .map(|s| MarginJson {
                n: s.n,
                t: s.t,
                lhs: s.lhs,
                rhs: s.rhs,
                margin: s.margin,
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("certificate serialization")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn state_json_round_trip() {
        let state = crate::scenario::figure1_initial_state::<f64>();
        let text = state_to_json(&state);
        let back = state_from_json(&text).unwrap();
        assert_eq!(back.l(), state.l());
        assert_eq!(back.k_max(), state.k_max());
        assert_eq!(back.u().coeffs(), state.u().coeffs());
        assert_eq!(back.v().coeffs(), state.v().coeffs());
    }

    #[test]
    fn state_json_field_names_and_order() {
        let state = crate::scenario::figure1_initial_state::<f64>();
        let text = state_to_json(&state);
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert!(value.get("L").is_some());
        assert_eq!(value["K_max"], serde_json::json!(20));
        assert_eq!(value["u_hat"].as_array().unwrap().len(), 41);
        // Entry 0 is mode k = -20, the conjugate of mode +20 (last entry).
        let first = value["u_hat"][0].as_array().unwrap();
        let last = value["u_hat"][40].as_array().unwrap();
        assert_eq!(first[0], last[0]);
        assert_eq!(first[1].as_f64().unwrap(), -last[1].as_f64().unwrap());
    }

    #[test]
    fn grid_csv_has_full_precision() {
        let field = GridField::new(vec![1.0 / 3.0, 2.0 / 3.0], 1.0).unwrap();
        let csv = grid_csv(&field, None).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("x,u"));
        let row = lines.next().unwrap();
        assert!(row.starts_with("0.0000000000000000e0,3.3333333333333331e-1"));
    }

    #[test]
    fn ledger_csv_header_matches_contract() {
        let csv = ledger_csv(&[]);
        assert_eq!(csv, "t,kinetic,potential,total,dissipated,residual\n");
    }

    #[test]
    fn rejects_malformed_state_json() {
        assert!(state_from_json("{}").is_err());
        assert!(state_from_json("not json").is_err());
        // Asymmetric coefficients must be rejected on load.
        let bad = r#"{"L": 1.0, "K_max": 1, "u_hat": [[1.0, 0.5], [0.0, 0.0], [1.0, 0.5]], "v_hat": [[0,0],[0,0],[0,0]]}"#;
        assert!(state_from_json(bad).is_err());
    }
}
