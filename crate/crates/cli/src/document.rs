//! JSON documents exchanged by the command-line tool.
//!
//! Every file is `{"schema_version": "1", "kind": ..., "payload": ...}`.
//! Complex numbers are `[re, im]` pairs and matrices are row-major nested
//! arrays. Unknown fields are rejected at every level.

use anyhow::{anyhow, bail, ensure, Context, Result};
use serde::{Deserialize, Serialize};

use tempcompat::channels::{CptpDiagnostics, Process, SuperOp};
use tempcompat::ensembles::ProductEnsemble;
use tempcompat::operators::{BipartiteOperator, ComplexMatrix, DensityMatrix};
use tempcompat::sot::{pauli_label, pauli_label_index, CorrelationTable};
use tempcompat::temporal::{Certificate, CompatibilityReport};
use tempcompat::{Complex64, Tolerances};

pub const SCHEMA_VERSION: &str = "1";

pub type MatrixJson = Vec<Vec<[f64; 2]>>;

#[derive(Serialize, Deserialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    State,
    Channel,
    Ensemble,
    Correlations,
    Process,
    Report,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::State => "state",
            Kind::Channel => "channel",
            Kind::Ensemble => "ensemble",
            Kind::Correlations => "correlations",
            Kind::Process => "process",
            Kind::Report => "report",
        }
    }
}

#[derive(Serialize, Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    schema_version: String,
    kind: Kind,
    payload: serde_json::Value,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct StatePayload {
    pub dim_a: usize,
    pub dim_b: usize,
    pub matrix: MatrixJson,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct DiagnosticsPayload {
    pub cptp: bool,
    pub choi_min_eigenvalue: f64,
    pub choi_max_eigenvalue: f64,
    pub tp_residual: f64,
    pub hermiticity_deviation: f64,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ChannelPayload {
    pub dim_in: usize,
    pub dim_out: usize,
    /// `C[(i,a),(j,b)] = E(|i><j|)[a,b]`.
    pub choi: MatrixJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnostics: Option<DiagnosticsPayload>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct EnsemblePayload {
    pub weights: Vec<f64>,
    pub states_a: Vec<MatrixJson>,
    pub states_b: Vec<MatrixJson>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct CorrelationEntry {
    /// Pauli string over `I, X, Y, Z`, one letter per qubit.
    pub alpha: String,
    pub beta: String,
    pub value: f64,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct CorrelationsPayload {
    pub qubits: usize,
    pub entries: Vec<CorrelationEntry>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ProcessPayload {
    pub channel: ChannelPayload,
    pub input_state: MatrixJson,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SideReport {
    /// `"A->B"` or `"B->A"`.
    pub direction: String,
    pub compatible: bool,
    pub boundary: bool,
    pub test_min_eigenvalue: f64,
    pub choi_min_eigenvalue: f64,
    pub reconstruction_residual: f64,
    pub cptp: bool,
    pub tp_residual: f64,
    pub faithful_marginal: bool,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ReportPayload {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    pub compatible_both: bool,
    pub ppt: bool,
    pub ppt_min_eigenvalue: f64,
    pub tolerance: f64,
    pub reports: Vec<SideReport>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Payload {
    State(StatePayload),
    Channel(ChannelPayload),
    Ensemble(EnsemblePayload),
    Correlations(CorrelationsPayload),
    Process(ProcessPayload),
    Report(ReportPayload),
}

impl Payload {
    pub fn kind(&self) -> Kind {
        match self {
            Payload::State(_) => Kind::State,
            Payload::Channel(_) => Kind::Channel,
            Payload::Ensemble(_) => Kind::Ensemble,
            Payload::Correlations(_) => Kind::Correlations,
            Payload::Process(_) => Kind::Process,
            Payload::Report(_) => Kind::Report,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let raw: RawDocument = serde_json::from_str(text).context("malformed document")?;
        ensure!(
            raw.schema_version == SCHEMA_VERSION,
            "unsupported schema_version {:?}, expected {SCHEMA_VERSION:?}",
            raw.schema_version
        );
        let kind = raw.kind;
        let payload = raw.payload;
        let context = || format!("malformed {} payload", kind.name());
        Ok(match kind {
            Kind::State => Payload::State(serde_json::from_value(payload).with_context(context)?),
            Kind::Channel => {
                Payload::Channel(serde_json::from_value(payload).with_context(context)?)
            }
            Kind::Ensemble => {
                Payload::Ensemble(serde_json::from_value(payload).with_context(context)?)
            }
            Kind::Correlations => {
                Payload::Correlations(serde_json::from_value(payload).with_context(context)?)
            }
            Kind::Process => {
                Payload::Process(serde_json::from_value(payload).with_context(context)?)
            }
            Kind::Report => Payload::Report(serde_json::from_value(payload).with_context(context)?),
        })
    }

    pub fn to_json(&self) -> String {
        let payload = match self {
            Payload::State(p) => serde_json::to_value(p),
            Payload::Channel(p) => serde_json::to_value(p),
            Payload::Ensemble(p) => serde_json::to_value(p),
            Payload::Correlations(p) => serde_json::to_value(p),
            Payload::Process(p) => serde_json::to_value(p),
            Payload::Report(p) => serde_json::to_value(p),
        }
        .expect("payloads serialize");
        let raw = RawDocument {
            schema_version: SCHEMA_VERSION.to_string(),
            kind: self.kind(),
            payload,
        };
        let mut text = serde_json::to_string_pretty(&raw).expect("documents serialize");
        text.push('\n');
        text
    }
}

pub fn matrix_to_json(m: &ComplexMatrix) -> MatrixJson {
    (0..m.rows())
        .map(|r| m.row(r).iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

pub fn matrix_from_json(rows: &MatrixJson, what: &str) -> Result<ComplexMatrix> {
    let cols = rows.first().map_or(0, Vec::len);
    ensure!(!rows.is_empty() && cols > 0, "{what}: matrix is empty");
    let mut data = Vec::with_capacity(rows.len() * cols);
    for (r, row) in rows.iter().enumerate() {
        ensure!(
            row.len() == cols,
            "{what}: row {r} has {} entries, expected {cols}",
            row.len()
        );
        data.extend(row.iter().map(|[re, im]| Complex64::new(*re, *im)));
    }
    Ok(ComplexMatrix::from_row_major(rows.len(), cols, data)?)
}

fn density_from_json(m: &MatrixJson, what: &str, tol: &Tolerances) -> Result<DensityMatrix> {
    DensityMatrix::new(matrix_from_json(m, what)?, tol)
        .with_context(|| format!("{what} is not a density matrix"))
}

impl StatePayload {
    pub fn from_operator(t: &BipartiteOperator) -> Self {
        Self {
            dim_a: t.dim_a(),
            dim_b: t.dim_b(),
            matrix: matrix_to_json(t.matrix()),
        }
    }

    pub fn to_operator(&self) -> Result<BipartiteOperator> {
        let m = matrix_from_json(&self.matrix, "state")?;
        Ok(BipartiteOperator::new(self.dim_a, self.dim_b, m)?)
    }
}

impl From<CptpDiagnostics> for DiagnosticsPayload {
    fn from(d: CptpDiagnostics) -> Self {
        Self {
            cptp: d.cptp,
            choi_min_eigenvalue: d.choi_min_eigenvalue,
            choi_max_eigenvalue: d.choi_max_eigenvalue,
            tp_residual: d.tp_residual,
            hermiticity_deviation: d.hermiticity_deviation,
        }
    }
}

impl ChannelPayload {
    pub fn from_channel(e: &SuperOp, diagnostics: Option<CptpDiagnostics>) -> Self {
        Self {
            dim_in: e.dim_in(),
            dim_out: e.dim_out(),
            choi: matrix_to_json(e.choi().matrix()),
            diagnostics: diagnostics.map(Into::into),
        }
    }

    pub fn to_channel(&self) -> Result<SuperOp> {
        let m = matrix_from_json(&self.choi, "choi matrix")?;
        Ok(SuperOp::from_choi(BipartiteOperator::new(
            self.dim_in,
            self.dim_out,
            m,
        )?))
    }
}

impl EnsemblePayload {
    #[cfg(test)]
    pub fn from_ensemble(e: &ProductEnsemble) -> Self {
        let to_json =
            |states: &[DensityMatrix]| states.iter().map(|s| matrix_to_json(s.matrix())).collect();
        Self {
            weights: e.weights().to_vec(),
            states_a: to_json(e.states_a()),
            states_b: to_json(e.states_b()),
        }
    }

    pub fn to_ensemble(&self, tol: &Tolerances) -> Result<ProductEnsemble> {
        let parse = |states: &[MatrixJson], side: char| -> Result<Vec<DensityMatrix>> {
            states
                .iter()
                .enumerate()
                .map(|(k, m)| density_from_json(m, &format!("ensemble state {side}[{k}]"), tol))
                .collect()
        };
        let a = parse(&self.states_a, 'A')?;
        let b = parse(&self.states_b, 'B')?;
        Ok(ProductEnsemble::new(self.weights.clone(), a, b)?)
    }
}

const PAULI_LETTERS: [char; 4] = ['I', 'X', 'Y', 'Z'];

pub fn format_pauli_label(index: usize, qubits: usize) -> String {
    pauli_label(index, qubits)
        .into_iter()
        .map(|a| PAULI_LETTERS[a as usize])
        .collect()
}

pub fn parse_pauli_label(label: &str, qubits: usize) -> Result<usize> {
    let digits: Vec<u8> = label
        .chars()
        .map(|ch| {
            PAULI_LETTERS
                .iter()
                .position(|p| *p == ch.to_ascii_uppercase())
                .map(|k| k as u8)
                .ok_or_else(|| anyhow!("invalid Pauli letter {ch:?} in label {label:?}"))
        })
        .collect::<Result<_>>()?;
    ensure!(
        digits.len() == qubits,
        "Pauli label {label:?} has {} letters, expected {qubits}",
        digits.len()
    );
    Ok(pauli_label_index(&digits)?)
}

impl CorrelationsPayload {
    pub fn from_table(t: &CorrelationTable) -> Self {
        let m = t.qubits();
        let labels = t.labels();
        let mut entries = Vec::with_capacity(labels * labels);
        for alpha in 0..labels {
            for beta in 0..labels {
                entries.push(CorrelationEntry {
                    alpha: format_pauli_label(alpha, m),
                    beta: format_pauli_label(beta, m),
                    value: t.get(alpha, beta),
                });
            }
        }
        Self { qubits: m, entries }
    }

    pub fn to_table(&self, tol: &Tolerances) -> Result<CorrelationTable> {
        ensure!(
            self.qubits >= 1,
            "correlation table needs at least one qubit"
        );
        let entries = self
            .entries
            .iter()
            .map(|e| {
                Ok((
                    parse_pauli_label(&e.alpha, self.qubits)?,
                    parse_pauli_label(&e.beta, self.qubits)?,
                    e.value,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CorrelationTable::from_entries(self.qubits, entries, tol)?)
    }
}

impl ProcessPayload {
    #[cfg(test)]
    pub fn from_process(p: &Process) -> Self {
        Self {
            channel: ChannelPayload::from_channel(p.channel(), None),
            input_state: matrix_to_json(p.input_state().matrix()),
        }
    }

    pub fn to_process(&self, tol: &Tolerances) -> Result<Process> {
        let channel = self.channel.to_channel()?;
        let rho = density_from_json(&self.input_state, "process input state", tol)?;
        Ok(Process::new(channel, rho)?)
    }
}

fn side_report(r: &CompatibilityReport) -> SideReport {
    SideReport {
        direction: format!("{}->{}", r.side, r.side.other()),
        compatible: r.compatible,
        boundary: r.boundary,
        test_min_eigenvalue: r.test_min_eigenvalue,
        choi_min_eigenvalue: r.choi_min_eigenvalue,
        reconstruction_residual: r.reconstruction_residual,
        cptp: r.cptp.cptp,
        tp_residual: r.cptp.tp_residual,
        faithful_marginal: r.faithful_marginal,
    }
}

impl ReportPayload {
    pub fn from_certificate(c: &Certificate, tol: &Tolerances, source: Option<String>) -> Self {
        Self {
            source,
            compatible_both: c.compatible_both(),
            ppt: c.ppt.ppt,
            ppt_min_eigenvalue: c.ppt.min_eigenvalue,
            tolerance: tol.verdict,
            reports: c.reports().into_iter().map(side_report).collect(),
        }
    }

    /// 0 when compatible in both directions, 2 otherwise.
    pub fn exit_code(&self) -> u8 {
        if self.compatible_both {
            0
        } else {
            2
        }
    }
}

/// A state document, or an ensemble document assembled into its state.
pub fn bipartite_from_payload(payload: &Payload, tol: &Tolerances) -> Result<BipartiteOperator> {
    match payload {
        Payload::State(s) => s.to_operator(),
        Payload::Ensemble(e) => Ok(e.to_ensemble(tol)?.assemble_state()),
        other => bail!(
            "expected a state or ensemble document, found {}",
            other.kind().name()
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempcompat::ensembles::{axis_state_ensemble, random_cptp, random_density};
    use tempcompat::sot::correlations_from_process;
    use tempcompat::temporal::certify;

    fn round_trip(p: &Payload) {
        let text = p.to_json();
        let back = Payload::parse(&text).unwrap();
        assert_eq!(&back, p);
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn every_kind_round_trips() {
        let tol = Tolerances::default();
        let ensemble = axis_state_ensemble();
        let tau = ensemble.assemble_state();
        let e = random_cptp(2, 2, 2, 4);
        let process = Process::new(e.clone(), random_density(2, 2, 5).unwrap()).unwrap();
        let table = correlations_from_process(&process, 1, &tol).unwrap();
        let cert = certify(&tau, &tol).unwrap();
        for p in [
            Payload::State(StatePayload::from_operator(&tau)),
            Payload::Channel(ChannelPayload::from_channel(
                &e,
                Some(e.is_cptp(&tol).unwrap()),
            )),
            Payload::Ensemble(EnsemblePayload::from_ensemble(&ensemble)),
            Payload::Correlations(CorrelationsPayload::from_table(&table)),
            Payload::Process(ProcessPayload::from_process(&process)),
            Payload::Report(ReportPayload::from_certificate(
                &cert,
                &tol,
                Some("x.json".into()),
            )),
        ] {
            round_trip(&p);
        }
    }

    #[test]
    fn typed_values_survive_round_trip() {
        let tol = Tolerances::default();
        let ensemble = axis_state_ensemble();
        let payload = EnsemblePayload::from_ensemble(&ensemble);
        assert_eq!(payload.to_ensemble(&tol).unwrap(), ensemble);
        let e = random_cptp(3, 2, 2, 9);
        let back = ChannelPayload::from_channel(&e, None).to_channel().unwrap();
        assert_eq!(back.max_distance(&e), 0.0);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let text = r#"{"schema_version":"1","kind":"state","payload":{"dim_a":1,"dim_b":1,"matrix":[[[1,0]]],"extra":0}}"#;
        assert!(Payload::parse(text).is_err());
        let text = r#"{"schema_version":"1","kind":"state","payload":{"dim_a":1,"dim_b":1,"matrix":[[[1,0]]]},"note":1}"#;
        assert!(Payload::parse(text).is_err());
        let text = r#"{"schema_version":"2","kind":"state","payload":{"dim_a":1,"dim_b":1,"matrix":[[[1,0]]]}}"#;
        let err = Payload::parse(text).unwrap_err();
        assert!(format!("{err:#}").contains("schema_version"));
    }

    #[test]
    fn pauli_labels() {
        assert_eq!(format_pauli_label(7, 2), "XZ");
        assert_eq!(parse_pauli_label("xz", 2).unwrap(), 7);
        assert!(parse_pauli_label("XQ", 2).is_err());
        assert!(parse_pauli_label("X", 2).is_err());
    }

    #[test]
    fn ragged_matrix_is_rejected() {
        let m: MatrixJson = vec![vec![[1.0, 0.0], [0.0, 0.0]], vec![[0.0, 0.0]]];
        assert!(matrix_from_json(&m, "state").is_err());
    }
}
