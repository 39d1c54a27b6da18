//! Deterministic CSV and JSON rendering.
//!
//! Every float is written with 17 significant digits in scientific notation
//! (`{:.16e}`), which round-trips any `f64`. JSON objects have sorted keys;
//! CSV uses `,` and LF line endings.

use std::io;

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::nodes::{NodeReport, SuperpositionNodes};
use crate::state::{AtomSpec, StateParams};
use crate::wronskian::BoundWave;

pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".to_string()
    } else if x > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

struct SciFormatter;

impl serde_json::ser::Formatter for SciFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(fmt_f64(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

/// JSON text with sorted keys, one trailing newline. Non-finite floats
/// become `null`.
pub fn to_json<T: Serialize>(value: &T) -> serde_json::Result<String> {
    let tree = serde_json::to_value(value)?;
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SciFormatter);
    tree.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}

pub fn write_csv(header: &[&str], rows: &[Vec<String>]) -> csv::Result<String> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("CSV fields are UTF-8"))
}

pub const WAVE_COLUMNS: [&str; 5] = ["r", "r_over_ro", "u_plus", "u_minus", "R"];
pub const FIGURE_COLUMNS: [&str; 2] = ["r_over_ro", "R_normalized"];
pub const NODE_COLUMNS: [&str; 8] = [
    "radius",
    "radius_over_ro",
    "kind",
    "left_slope_sign",
    "right_slope_sign",
    "value_left",
    "value_right",
    "discontinuous",
];
pub const TRACK_COLUMNS: [&str; 4] = ["track", "t", "radius", "radius_over_ro"];

fn atom_json(atom: AtomSpec) -> Value {
    json!({ "z": atom.z, "n": atom.n })
}

pub fn state_json(atom: AtomSpec, state: &StateParams) -> Value {
    let mut v = json!({
        "atom": atom_json(atom),
        "energy": state.energy,
        "r_o": state.r_o,
        "k_o": state.k_o,
        "omega": state.omega,
        "beta0_sq": state.beta0_sq,
        "alpha": state.alpha,
        "beta1": state.beta1,
        "units": "atomic",
    });
    if let Some(si) = state.constants.si {
        v["si"] = json!({
            "energy_ev": si.energy_ev(state.energy),
            "r_o_m": si.length_m(state.r_o),
            "omega_per_s": si.angular_frequency_per_s(state.omega),
        });
    }
    v
}

pub fn state_csv(atom: AtomSpec, state: &StateParams) -> csv::Result<String> {
    let header = ["z", "n", "energy", "r_o", "k_o", "omega", "beta0_sq", "alpha", "beta1"];
    let row = vec![
        atom.z.to_string(),
        atom.n.to_string(),
        fmt_f64(state.energy),
        fmt_f64(state.r_o),
        fmt_f64(state.k_o),
        fmt_f64(state.omega),
        fmt_f64(state.beta0_sq),
        fmt_f64(state.alpha),
        fmt_f64(state.beta1),
    ];
    write_csv(&header, &[row])
}

/// Factor that scales `max|R|` to one, or one when `normalize` is off.
pub fn normalization(wave: &BoundWave, normalize: bool) -> f64 {
    let peak = wave.r_vals.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if normalize && peak > 0.0 {
        1.0 / peak
    } else {
        1.0
    }
}

pub fn wave_csv(wave: &BoundWave, normalize: bool) -> csv::Result<String> {
    let s = normalization(wave, normalize);
    let r_o = wave.r_o();
    let rows: Vec<Vec<String>> = wave
        .grid
        .samples
        .iter()
        .enumerate()
        .map(|(i, &r)| {
            vec![
                fmt_f64(r),
                fmt_f64(r / r_o),
                fmt_f64(wave.u_plus_vals[i]),
                fmt_f64(s * wave.u_minus[i]),
                fmt_f64(s * wave.r_vals[i]),
            ]
        })
        .collect();
    write_csv(&WAVE_COLUMNS, &rows)
}

pub fn wave_json(wave: &BoundWave, normalize: bool) -> Value {
    let s = normalization(wave, normalize);
    let r_o = wave.r_o();
    let mut v = state_json(wave.atom, &wave.state);
    let obj = v.as_object_mut().expect("state JSON is an object");
    let scaled = |xs: &[f64]| xs.iter().map(|x| s * x).collect::<Vec<_>>();
    obj.insert("r".into(), json!(wave.grid.samples));
    obj.insert(
        "r_over_ro".into(),
        json!(wave.grid.samples.iter().map(|r| r / r_o).collect::<Vec<_>>()),
    );
    obj.insert("u_plus".into(), json!(wave.u_plus_vals));
    obj.insert("u_minus".into(), json!(scaled(&wave.u_minus)));
    obj.insert("R".into(), json!(scaled(&wave.r_vals)));
    obj.insert("left_limit_at_ro".into(), json!(s * wave.left_limit_at_ro));
    obj.insert("right_limit_at_ro".into(), json!(s * wave.right_limit_at_ro));
    obj.insert("normalization".into(), json!(s));
    obj.insert("exclusion_radius".into(), json!(wave.grid.exclusion_radius));
    obj.insert("exclusion_centers".into(), json!(wave.grid.exclusion_centers));
    v
}

pub fn figure_csv(wave: &BoundWave, normalize: bool) -> csv::Result<String> {
    let s = normalization(wave, normalize);
    let r_o = wave.r_o();
    let rows: Vec<Vec<String>> = wave
        .grid
        .samples
        .iter()
        .zip(&wave.r_vals)
        .map(|(r, v)| vec![fmt_f64(r / r_o), fmt_f64(s * v)])
        .collect();
    write_csv(&FIGURE_COLUMNS, &rows)
}

pub fn nodes_json(atom: AtomSpec, report: &NodeReport) -> Value {
    let mut v = serde_json::to_value(report).expect("node report serializes");
    v["atom"] = atom_json(atom);
    v
}

pub fn nodes_csv(report: &NodeReport) -> csv::Result<String> {
    let rows: Vec<Vec<String>> = report
        .nodes
        .iter()
        .map(|n| {
            vec![
                fmt_f64(n.radius),
                fmt_f64(n.radius_over_ro),
                n.kind.as_str().to_string(),
                n.left_slope_sign.to_string(),
                n.right_slope_sign.to_string(),
                fmt_f64(n.value_left),
                fmt_f64(n.value_right),
                n.discontinuous.to_string(),
            ]
        })
        .collect();
    write_csv(&NODE_COLUMNS, &rows)
}

pub fn tracks_json(z: u32, levels: &[u32], weights: &[f64], result: &SuperpositionNodes) -> Value {
    let mut v = serde_json::to_value(result).expect("tracks serialize");
    let obj: &mut Map<String, Value> = v.as_object_mut().expect("object");
    obj.insert("z".into(), json!(z));
    obj.insert("levels".into(), json!(levels));
    obj.insert("weights".into(), json!(weights));
    v
}

pub fn tracks_csv(result: &SuperpositionNodes) -> csv::Result<String> {
    let mut rows = Vec::new();
    for (id, track) in result.tracks.iter().enumerate() {
        for (t, r) in track.times.iter().zip(&track.radii) {
            rows.push(vec![
                id.to_string(),
                fmt_f64(*t),
                fmt_f64(*r),
                fmt_f64(r / result.r_ref),
            ]);
        }
    }
    write_csv(&TRACK_COLUMNS, &rows)
}
