//! Classical-to-quantum data encodings: angle, amplitude (binary-tree state
//! preparation) and IQP, plus the softmax-style homeomorphism from `R^{n-1}`
//! onto the open probability simplex used to preprocess data for them.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::statevector::{
    Circuit, Control, Gate, Statevector, BASIS_ORDERING, ROTATION_ANGLE_SCALE, ROTATION_CONVENTION,
};

/// Largest magnitude accepted by [`simplex_map`] before `exp` overflows.
pub const SIMPLEX_MAP_LIMIT: f64 = 700.0;

/// Fraction of the interval reserved below the minimum by
/// [`Preprocessing::MinMaxScaled`], keeping every value strictly above 0.
pub const MIN_MAX_MARGIN: f64 = 0.01;

/// A finite, non-empty feature vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct DataPoint(Vec<f64>);

impl DataPoint {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Empty);
        }
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite { index, value });
        }
        Ok(Self(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

impl TryFrom<Vec<f64>> for DataPoint {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        DataPoint::new(values)
    }
}

impl From<DataPoint> for Vec<f64> {
    fn from(p: DataPoint) -> Self {
        p.0
    }
}

/// A point of the open simplex: strictly positive entries summing to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexPoint(Vec<f64>);

impl SimplexPoint {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::InvalidParameter(format!(
                "simplex points need at least 2 entries, got {}",
                values.len()
            )));
        }
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !(**v > 0.0)) {
            return Err(Error::NonPositive { index, value });
        }
        let sum: f64 = values.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::NotNormalized(sum));
        }
        Ok(Self(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

/// `f(x) = (e^{x_1}, …, e^{x_{n-1}}, 1) / (1 + Σ e^{x_i})`.
pub fn simplex_map(x: &DataPoint) -> Result<SimplexPoint> {
    if let Some((index, &value)) =
        x.values().iter().enumerate().find(|(_, v)| v.abs() > SIMPLEX_MAP_LIMIT)
    {
        return Err(Error::Overflow { index, value });
    }
    let mut out: Vec<f64> = x.values().iter().map(|v| v.exp()).collect();
    out.push(1.0);
    let total: f64 = out.iter().sum();
    out.iter_mut().for_each(|v| *v /= total);
    // Rounding can leave the sum a few ulps off 1; the constructor checks 1e-12.
    SimplexPoint::new(out)
}

/// `f^{-1}(s) = (log(s_1/s_n), …, log(s_{n-1}/s_n))`.
pub fn simplex_map_inverse(s: &SimplexPoint) -> Result<DataPoint> {
    let (last, head) = s.values().split_last().expect("simplex points have >= 2 entries");
    DataPoint::new(head.iter().map(|v| (v / last).ln()).collect())
}

/// Gate sequence `⊗_l exp(-i X_l x_l)` on `|x|` qubits.
pub fn angle_circuit(x: &DataPoint) -> Result<Circuit> {
    let mut c = Circuit::new(x.dim())?;
    for (qubit, &v) in x.values().iter().enumerate() {
        c.push(Gate::Rx { qubit, theta: ROTATION_ANGLE_SCALE * v })?;
    }
    Ok(c)
}

pub fn encode_angle(x: &DataPoint) -> Result<Statevector> {
    angle_circuit(x)?.run()
}

/// Pads `probs` with zeros to the next power of two (at least 2) after
/// checking it is a probability vector.
fn padded_probabilities(probs: &[f64]) -> Result<Vec<f64>> {
    if probs.is_empty() {
        return Err(Error::Empty);
    }
    for (index, &value) in probs.iter().enumerate() {
        if !value.is_finite() {
            return Err(Error::NonFinite { index, value });
        }
        if value < 0.0 {
            return Err(Error::NegativeProbability { index, value });
        }
    }
    let sum: f64 = probs.iter().sum();
    if sum == 0.0 {
        return Err(Error::AllZero);
    }
    if (sum - 1.0).abs() > 1e-9 {
        return Err(Error::NotNormalized(sum));
    }
    let dim = probs.len().next_power_of_two().max(2);
    let mut padded = probs.to_vec();
    padded.resize(dim, 0.0);
    Ok(padded)
}

/// Binary-tree state preparation for the probability vector `probs`.
///
/// The root splits on the most significant qubit; each deeper level rotates
/// the next qubit down, controlled on the path taken so far. The rotation at
/// a node is `R_y(2·asin(√(upper/parent)))`, where `upper` is the mass of the
/// half whose target bit is 1. Nodes with zero mass emit no gate.
pub fn amplitude_circuit(probs: &[f64]) -> Result<Circuit> {
    let padded = padded_probabilities(probs)?;
    let n = padded.len().trailing_zeros() as usize;
    let mut c = Circuit::new(n)?;
    for level in 0..n {
        let target = n - 1 - level;
        let block = 1usize << (n - level);
        for prefix in 0..1usize << level {
            let start = prefix * block;
            let parent: f64 = padded[start..start + block].iter().sum();
            if parent <= 0.0 {
                continue;
            }
            let upper: f64 = padded[start + block / 2..start + block].iter().sum();
            let theta = 2.0 * (upper / parent).min(1.0).sqrt().asin();
            if theta == 0.0 {
                continue;
            }
            let controls = (0..level)
                .map(|i| Control { qubit: n - level + i, on_one: (prefix >> i) & 1 == 1 })
                .collect();
            c.push(Gate::ControlledRy { controls, target, theta })?;
        }
    }
    Ok(c)
}

/// Prepares the state whose basis probabilities are `probs` (zero-padded to
/// a power of two); amplitudes are the non-negative square roots.
pub fn encode_amplitude(probs: &[f64]) -> Result<Statevector> {
    amplitude_circuit(probs)?.run()
}

fn check_iqp_domain(x: &DataPoint) -> Result<()> {
    match x.values().iter().enumerate().find(|(_, v)| !(**v > 0.0 && **v <= TAU)) {
        Some((index, &value)) => Err(Error::OutsideIqpDomain { index, value }),
        None => Ok(()),
    }
}

/// Gate form of the diagonal `U_Z(x) = exp(i(Σ x_i Z_i + Σ_{i≠j} (π-x_i)(π-x_j) Z_i Z_j))`.
///
/// The `i = j` terms of the double sum are `Z_i² = I` and only contribute a
/// global phase, so they are omitted.
fn push_iqp_phases(c: &mut Circuit, x: &[f64]) -> Result<()> {
    for (i, &xi) in x.iter().enumerate() {
        c.push(Gate::ZPhase { qubit: i, theta: xi })?;
    }
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            let theta = 2.0 * (PI - x[i]) * (PI - x[j]);
            c.push(Gate::ZzPhase { a: i, b: j, theta })?;
        }
    }
    Ok(())
}

/// `U_Z(x) H^{⊗n} U_Z(x) H^{⊗n}` as a gate list.
pub fn iqp_circuit(x: &DataPoint) -> Result<Circuit> {
    check_iqp_domain(x)?;
    let n = x.dim();
    let mut c = Circuit::new(n)?;
    for _ in 0..2 {
        for q in 0..n {
            c.push(Gate::H(q))?;
        }
        push_iqp_phases(&mut c, x.values())?;
    }
    Ok(c)
}

/// Phase of `U_Z(x)` on basis state `k`, i.e. `U_Z(x)|k⟩ = e^{i·phase}|k⟩`.
pub fn iqp_phase(x: &[f64], k: usize) -> f64 {
    let sign = |q: usize| if (k >> q) & 1 == 0 { 1.0 } else { -1.0 };
    let mut phase = 0.0;
    for (i, &xi) in x.iter().enumerate() {
        phase += xi * sign(i);
    }
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            phase += 2.0 * (PI - x[i]) * (PI - x[j]) * sign(i) * sign(j);
        }
    }
    phase
}

pub fn encode_iqp(x: &DataPoint) -> Result<Statevector> {
    iqp_circuit(x)?.run()
}

/// Same state as [`encode_iqp`], applying each `U_Z` as one diagonal pass.
pub fn encode_iqp_fused(x: &DataPoint) -> Result<Statevector> {
    check_iqp_domain(x)?;
    let n = x.dim();
    let mut hadamards = Circuit::new(n)?;
    for q in 0..n {
        hadamards.push(Gate::H(q))?;
    }
    let mut state = Statevector::zero(n)?;
    for _ in 0..2 {
        hadamards.apply_to(&mut state)?;
        state.apply_diagonal_phases(|k| iqp_phase(x.values(), k));
    }
    Ok(state)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SchemeKind {
    Angle,
    Amplitude,
    Iqp,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 3] = [SchemeKind::Angle, SchemeKind::Amplitude, SchemeKind::Iqp];

    pub fn as_str(self) -> &'static str {
        match self {
            SchemeKind::Angle => "angle",
            SchemeKind::Amplitude => "amplitude",
            SchemeKind::Iqp => "iqp",
        }
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SchemeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "angle" => Ok(SchemeKind::Angle),
            "amplitude" => Ok(SchemeKind::Amplitude),
            "iqp" => Ok(SchemeKind::Iqp),
            other => Err(Error::InvalidScheme(format!("unknown encoding `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preprocessing {
    None,
    /// [`simplex_map`]; adds one dimension.
    Simplex,
    /// `2π·f(x)`, landing in `(0, 2π]^n`; adds one dimension.
    #[serde(rename = "simplex-2pi")]
    SimplexScaled,
    /// Per-coordinate min-max scaling over the dataset into `(0, 2π]`.
    #[serde(rename = "minmax-2pi")]
    MinMaxScaled,
}

impl Preprocessing {
    pub fn as_str(self) -> &'static str {
        match self {
            Preprocessing::None => "none",
            Preprocessing::Simplex => "simplex",
            Preprocessing::SimplexScaled => "simplex-2pi",
            Preprocessing::MinMaxScaled => "minmax-2pi",
        }
    }
}

impl fmt::Display for Preprocessing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Preprocessing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Preprocessing::None),
            "simplex" => Ok(Preprocessing::Simplex),
            "simplex-2pi" => Ok(Preprocessing::SimplexScaled),
            "minmax-2pi" => Ok(Preprocessing::MinMaxScaled),
            other => Err(Error::InvalidScheme(format!("unknown preprocessing `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EncodingScheme {
    kind: SchemeKind,
    preprocessing: Preprocessing,
}

impl EncodingScheme {
    pub fn new(kind: SchemeKind, preprocessing: Preprocessing) -> Result<Self> {
        if kind == SchemeKind::Amplitude && preprocessing != Preprocessing::Simplex {
            return Err(Error::InvalidScheme(format!(
                "amplitude encoding requires simplex preprocessing, got {preprocessing}"
            )));
        }
        Ok(Self { kind, preprocessing })
    }

    /// angle: none; amplitude: simplex; iqp: `2π·f`.
    pub fn default_for(kind: SchemeKind) -> Self {
        let preprocessing = match kind {
            SchemeKind::Angle => Preprocessing::None,
            SchemeKind::Amplitude => Preprocessing::Simplex,
            SchemeKind::Iqp => Preprocessing::SimplexScaled,
        };
        Self { kind, preprocessing }
    }

    pub fn kind(&self) -> SchemeKind {
        self.kind
    }

    pub fn preprocessing(&self) -> Preprocessing {
        self.preprocessing
    }

    fn encode_values(&self, values: Vec<f64>) -> Result<Statevector> {
        match self.kind {
            SchemeKind::Angle => encode_angle(&DataPoint::new(values)?),
            SchemeKind::Amplitude => encode_amplitude(&values),
            SchemeKind::Iqp => encode_iqp(&DataPoint::new(values)?),
        }
    }
}

fn preprocess(data: &[DataPoint], pre: Preprocessing) -> Result<Vec<Vec<f64>>> {
    match pre {
        Preprocessing::None => Ok(data.iter().map(|p| p.values().to_vec()).collect()),
        Preprocessing::Simplex => data
            .iter()
            .map(|p| simplex_map(p).map(|s| s.values().to_vec()))
            .collect(),
        Preprocessing::SimplexScaled => data
            .iter()
            .map(|p| simplex_map(p).map(|s| s.values().iter().map(|v| TAU * v).collect()))
            .collect(),
        Preprocessing::MinMaxScaled => {
            let Some(first) = data.first() else {
                return Ok(Vec::new());
            };
            let dim = first.dim();
            let (lo, hi): (Vec<f64>, Vec<f64>) = (0..dim)
                .map(|c| {
                    data.iter().map(|p| p.values()[c]).fold(
                        (f64::INFINITY, f64::NEG_INFINITY),
                        |(lo, hi), v| (lo.min(v), hi.max(v)),
                    )
                })
                .unzip();
            Ok(data
                .iter()
                .map(|p| {
                    p.values()
                        .iter()
                        .enumerate()
                        .map(|(c, &v)| {
                            let span = hi[c] - lo[c];
                            let t = if span > 0.0 { (v - lo[c]) / span } else { 1.0 };
                            TAU * (t + MIN_MAX_MARGIN) / (1.0 + MIN_MAX_MARGIN)
                        })
                        .collect()
                })
                .collect())
        }
    }
}

/// Raw points together with their encoded states under one scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct EncodedDataset {
    scheme: EncodingScheme,
    points: Vec<DataPoint>,
    states: Vec<Statevector>,
}

impl EncodedDataset {
    pub fn scheme(&self) -> EncodingScheme {
        self.scheme
    }

    pub fn points(&self) -> &[DataPoint] {
        &self.points
    }

    pub fn states(&self) -> &[Statevector] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn n_qubits(&self) -> Option<usize> {
        self.states.first().map(Statevector::n_qubits)
    }

    pub fn to_json(&self) -> Result<String> {
        let doc = EncodedDatasetDoc {
            scheme: self.scheme.kind,
            preprocessing: self.scheme.preprocessing,
            basis_ordering: BASIS_ORDERING.to_string(),
            rotation_convention: ROTATION_CONVENTION.to_string(),
            n_qubits: self.n_qubits().unwrap_or(0),
            points: self.points.iter().map(|p| p.values().to_vec()).collect(),
            states: self
                .states
                .iter()
                .map(|s| s.amplitudes().iter().map(|a| [a.re, a.im]).collect())
                .collect(),
        };
        Ok(serde_json::to_string_pretty(&doc)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: EncodedDatasetDoc = serde_json::from_str(text)?;
        let scheme = EncodingScheme::new(doc.scheme, doc.preprocessing)?;
        let points = doc.points.into_iter().map(DataPoint::new).collect::<Result<_>>()?;
        let states = doc
            .states
            .into_iter()
            .map(|amps| {
                Statevector::from_amplitudes(amps.into_iter().map(|[re, im]| C64::new(re, im)).collect())
            })
            .collect::<Result<_>>()?;
        Ok(Self { scheme, points, states })
    }
}

#[derive(Serialize, Deserialize)]
struct EncodedDatasetDoc {
    scheme: SchemeKind,
    preprocessing: Preprocessing,
    basis_ordering: String,
    rotation_convention: String,
    n_qubits: usize,
    points: Vec<Vec<f64>>,
    states: Vec<Vec<[f64; 2]>>,
}

/// Preprocesses and encodes every point. Points are encoded in parallel;
/// output order matches input order.
pub fn encode_dataset(data: &[DataPoint], scheme: EncodingScheme) -> Result<EncodedDataset> {
    if let Some(first) = data.first() {
        if let Some(bad) = data.iter().find(|p| p.dim() != first.dim()) {
            return Err(Error::DimensionMismatch { expected: first.dim(), found: bad.dim() });
        }
    }
    let prepared = preprocess(data, scheme.preprocessing)?;
    let states = prepared
        .into_par_iter()
        .map(|values| scheme.encode_values(values))
        .collect::<Result<Vec<_>>>()?;
    Ok(EncodedDataset { scheme, points: data.to_vec(), states })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, LN_2};

    fn dp(v: &[f64]) -> DataPoint {
        DataPoint::new(v.to_vec()).unwrap()
    }

    #[test]
    fn simplex_map_examples() {
        let s = simplex_map(&dp(&[0.0, 0.0])).unwrap();
        for v in s.values() {
            assert!((v - 1.0 / 3.0).abs() < 1e-15);
        }
        let s = simplex_map(&dp(&[LN_2, 0.0])).unwrap();
        for (a, b) in s.values().iter().zip([0.5, 0.25, 0.25]) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn simplex_inverse_examples() {
        let x = simplex_map_inverse(&SimplexPoint::new(vec![1.0 / 3.0; 3]).unwrap()).unwrap();
        assert!(x.values().iter().all(|v| v.abs() < 1e-15));
        let x = simplex_map_inverse(&SimplexPoint::new(vec![0.5, 0.25, 0.25]).unwrap()).unwrap();
        assert!((x.values()[0] - LN_2).abs() < 1e-15);
        assert!(x.values()[1].abs() < 1e-15);
    }

    #[test]
    fn simplex_errors() {
        assert!(matches!(simplex_map(&dp(&[701.0])), Err(Error::Overflow { index: 0, .. })));
        assert!(matches!(
            SimplexPoint::new(vec![0.0, 1.0]),
            Err(Error::NonPositive { index: 0, .. })
        ));
        assert!(matches!(SimplexPoint::new(vec![0.5, 0.6]), Err(Error::NotNormalized(_))));
        assert!(DataPoint::new(vec![]).is_err());
        assert!(DataPoint::new(vec![f64::NAN]).is_err());
    }

    #[test]
    fn angle_examples() {
        let s = encode_angle(&dp(&[0.0, 0.0])).unwrap();
        assert!((s.amplitudes()[0].re - 1.0).abs() < 1e-15);
        let a = encode_angle(&dp(&[FRAC_PI_2, 0.0])).unwrap();
        let fid = a.inner_product(&s).unwrap().norm_sqr();
        assert!(fid < 1e-30);
    }

    #[test]
    fn amplitude_small_examples() {
        let s = encode_amplitude(&[1.0, 0.0]).unwrap();
        assert_eq!(s.n_qubits(), 1);
        assert!((s.amplitudes()[0].re - 1.0).abs() < 1e-15);

        let s = encode_amplitude(&[0.25; 4]).unwrap();
        let mut hh = Circuit::new(2).unwrap();
        hh.push(Gate::H(0)).unwrap().push(Gate::H(1)).unwrap();
        let ip = s.inner_product(&hh.run().unwrap()).unwrap();
        assert!((ip.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn amplitude_pads_and_validates() {
        let s = encode_amplitude(&[0.5, 0.3, 0.2]).unwrap();
        assert_eq!(s.n_qubits(), 2);
        assert!(s.probabilities()[3].abs() < 1e-30);
        assert!(matches!(encode_amplitude(&[0.0, 0.0]), Err(Error::AllZero)));
        assert!(matches!(
            encode_amplitude(&[-0.1, 1.1]),
            Err(Error::NegativeProbability { index: 0, .. })
        ));
        assert!(matches!(encode_amplitude(&[0.2, 0.2]), Err(Error::NotNormalized(_))));
    }

    #[test]
    fn iqp_single_qubit_matches_matrix_product() {
        // n = 1: U_Z = diag(e^{ix}, e^{-ix}); state = U H U H |0⟩.
        for x in [0.3, 1.7, PI, TAU] {
            let h = std::f64::consts::FRAC_1_SQRT_2;
            let u = [C64::from_polar(1.0, x), C64::from_polar(1.0, -x)];
            // H|0⟩ = (h, h); U·; H·; U·
            let v = [u[0] * h, u[1] * h];
            let w = [(v[0] + v[1]) * h, (v[0] - v[1]) * h];
            let expect = [u[0] * w[0], u[1] * w[1]];
            let s = encode_iqp(&dp(&[x])).unwrap();
            for (a, b) in s.amplitudes().iter().zip(expect) {
                assert!((a - b).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn iqp_domain_checked() {
        assert!(matches!(encode_iqp(&dp(&[0.0, 1.0])), Err(Error::OutsideIqpDomain { index: 0, .. })));
        assert!(matches!(encode_iqp(&dp(&[1.0, 7.0])), Err(Error::OutsideIqpDomain { index: 1, .. })));
        assert!(encode_iqp(&dp(&[TAU, 1.0])).is_ok());
    }

    #[test]
    fn iqp_self_fidelity_is_one() {
        let x = dp(&[0.4, 2.2, 5.0]);
        let s = encode_iqp(&x).unwrap();
        assert!((s.inner_product(&s).unwrap().norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn scheme_validation() {
        assert!(EncodingScheme::new(SchemeKind::Amplitude, Preprocessing::None).is_err());
        assert!(EncodingScheme::new(SchemeKind::Iqp, Preprocessing::MinMaxScaled).is_ok());
        assert_eq!("iqp".parse::<SchemeKind>().unwrap(), SchemeKind::Iqp);
        assert!("qft".parse::<SchemeKind>().is_err());
    }

    #[test]
    fn dataset_bookkeeping() {
        let empty = encode_dataset(&[], EncodingScheme::default_for(SchemeKind::Angle)).unwrap();
        assert!(empty.is_empty());

        let data = vec![dp(&[0.3, -1.2]), dp(&[1.5, 0.2]), dp(&[-0.7, 0.9])];
        let amp = encode_dataset(&data, EncodingScheme::default_for(SchemeKind::Amplitude)).unwrap();
        assert_eq!(amp.n_qubits(), Some(2));
        for (p, s) in data.iter().zip(amp.states()) {
            let simplex = simplex_map(p).unwrap();
            for (prob, want) in s.probabilities().iter().zip(simplex.values().iter().chain([&0.0])) {
                assert!((prob - want).abs() < 1e-10);
            }
        }

        let iqp = EncodingScheme::new(SchemeKind::Iqp, Preprocessing::MinMaxScaled).unwrap();
        assert_eq!(encode_dataset(&data, iqp).unwrap().n_qubits(), Some(2));
        assert_eq!(
            encode_dataset(&data, EncodingScheme::default_for(SchemeKind::Iqp)).unwrap().n_qubits(),
            Some(3)
        );

        let ragged = vec![dp(&[0.1]), dp(&[0.1, 0.2])];
        assert!(matches!(
            encode_dataset(&ragged, EncodingScheme::default_for(SchemeKind::Angle)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn min_max_lands_in_iqp_domain() {
        let data = vec![dp(&[-3.0, 5.0]), dp(&[2.0, 5.0]), dp(&[0.0, 5.0])];
        let scaled = preprocess(&data, Preprocessing::MinMaxScaled).unwrap();
        for row in &scaled {
            assert!(row.iter().all(|v| *v > 0.0 && *v <= TAU));
        }
        assert_eq!(scaled[1][0], TAU);
    }

    #[test]
    fn dataset_json_carries_conventions() {
        let data = vec![dp(&[0.3, -1.2]), dp(&[1.5, 0.2])];
        let ds = encode_dataset(&data, EncodingScheme::default_for(SchemeKind::Iqp)).unwrap();
        let text = ds.to_json().unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["scheme"], "iqp");
        assert_eq!(v["preprocessing"], "simplex-2pi");
        assert_eq!(v["basis_ordering"], BASIS_ORDERING);
        assert_eq!(v["states"][0].as_array().unwrap().len(), 8);
        assert_eq!(EncodedDataset::from_json(&text).unwrap(), ds);
    }
}
