//! File formats. Floats are written with 17 significant digits so every value
//! round-trips exactly.

use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::bohm::Trajectory;
use crate::error::{Error, Result};
use crate::interference::ScreenHistogram;
use crate::optics::Path as SlitPath;

/// `{:.16e}`: 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

pub fn histogram_csv(hist: &ScreenHistogram) -> String {
    let mut s = String::from("bin_left_m,bin_right_m,count\n");
    for (w, c) in hist.bin_edges.windows(2).zip(&hist.counts) {
        let _ = writeln!(s, "{},{},{}", fmt_f64(w[0]), fmt_f64(w[1]), c);
    }
    s
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: String,
    pub visibility: f64,
    pub distinguishability: f64,
    pub duality: f64,
    pub mean_omega_red: f64,
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut s = String::from("value,V,D,duality,mean_omega_red\n");
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{}",
            r.value,
            fmt_f64(r.visibility),
            fmt_f64(r.distinguishability),
            fmt_f64(r.duality),
            fmt_f64(r.mean_omega_red)
        );
    }
    s
}

fn slit_label(p: SlitPath) -> &'static str {
    match p {
        SlitPath::SlitOne => "SlitOne",
        SlitPath::SlitTwo => "SlitTwo",
    }
}

/// Polylines as `z,x,trajectory_id,origin_slit`, keeping every `stride`-th
/// sample plus both endpoints.
pub fn write_trajectories_csv<W: Write>(
    out: &mut W,
    trajectories: &[Trajectory],
    stride: usize,
) -> io::Result<()> {
    let stride = stride.max(1);
    writeln!(out, "z,x,trajectory_id,origin_slit")?;
    for (id, t) in trajectories.iter().enumerate() {
        let last = t.samples.len() - 1;
        for (i, &(z, x)) in t.samples.iter().enumerate() {
            if i % stride == 0 || i == last {
                writeln!(
                    out,
                    "{},{},{},{}",
                    fmt_f64(z),
                    fmt_f64(x),
                    id,
                    slit_label(t.origin_slit)
                )?;
            }
        }
    }
    Ok(())
}

/// Pretty JSON whose floats carry 17 significant digits.
struct SigFigs<'a>(PrettyFormatter<'a>);

impl Formatter for SigFigs<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        w.write_all(fmt_f64(value).as_bytes())
    }
    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, f64::from(value))
    }
    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }
    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }
    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }
    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }
    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }
    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SigFigs(PrettyFormatter::new()));
    value.serialize(&mut ser).expect("in-memory serialization");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}
