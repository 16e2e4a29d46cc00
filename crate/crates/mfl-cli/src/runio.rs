//! Run plumbing: stdin/stdout-aware input and output, content hashing,
//! and the per-run manifest.
//!
//! Every command emits a manifest recording what went in and what came
//! out. Deterministic outputs are listed with their SHA-256 so a re-run
//! can be byte-compared from manifests alone; outputs containing
//! wall-clock fields (trace and benchmark CSVs) are listed separately
//! without a hash, since their bytes legitimately differ between runs.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::time::Instant;

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

/// The pseudo-path accepted by `--in`/`--out` for standard streams.
pub const STDIO: &str = "-";

/// Read an input argument: `-` means stdin.
pub fn read_input(path: &str) -> Result<String> {
    if path == STDIO {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .context("reading stdin")?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {path}"))
    }
}

/// Label under which an input or output appears in the manifest.
pub fn stream_label(path: &str, output: bool) -> String {
    if path == STDIO {
        if output { "<stdout>".into() } else { "<stdin>".into() }
    } else {
        path.to_string()
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    let mut hex = String::with_capacity(64);
    for byte in digest {
        hex.push_str(&format!("{byte:02x}"));
    }
    hex
}

/// Manifest of one command invocation.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    /// Subcommand name.
    pub command: String,
    /// Full argument vector as invoked.
    pub argv: Vec<String>,
    /// Tool version.
    pub version: String,
    /// SHA-256 of every input, keyed by path (stdin as `<stdin>`).
    pub inputs: BTreeMap<String, String>,
    /// SHA-256 of every deterministic output, keyed by path.
    pub outputs: BTreeMap<String, String>,
    /// Outputs whose bytes include wall-clock fields; listed without a
    /// hash because they are excluded from the reproducibility contract.
    pub timing_outputs: Vec<String>,
    /// Wall-clock duration of the whole command, in milliseconds.
    pub wall_ms: u128,
}

/// Accumulates inputs and outputs during a command, then writes the
/// manifest next to the primary output (or to stderr when piping).
pub struct Run {
    command: String,
    started: Instant,
    inputs: BTreeMap<String, String>,
    outputs: BTreeMap<String, String>,
    timing_outputs: Vec<String>,
}

impl Run {
    pub fn new(command: &str) -> Run {
        Run {
            command: command.to_string(),
            started: Instant::now(),
            inputs: BTreeMap::new(),
            outputs: BTreeMap::new(),
            timing_outputs: Vec::new(),
        }
    }

    /// Read and record an input in one step.
    pub fn input(&mut self, path: &str) -> Result<String> {
        let content = read_input(path)?;
        self.inputs
            .insert(stream_label(path, false), sha256_hex(content.as_bytes()));
        Ok(content)
    }

    /// Write a deterministic output (`-` = stdout) and record its hash.
    pub fn output(&mut self, path: &str, bytes: &[u8]) -> Result<()> {
        self.write_raw(path, bytes)?;
        self.outputs
            .insert(stream_label(path, true), sha256_hex(bytes));
        Ok(())
    }

    /// Write an output that embeds timing and is therefore not
    /// byte-reproducible; recorded without a hash.
    pub fn timing_output(&mut self, path: &str, bytes: &[u8]) -> Result<()> {
        self.write_raw(path, bytes)?;
        self.timing_outputs.push(stream_label(path, true));
        Ok(())
    }

    fn write_raw(&self, path: &str, bytes: &[u8]) -> Result<()> {
        if path == STDIO {
            std::io::stdout().write_all(bytes).context("writing stdout")
        } else {
            std::fs::write(path, bytes).with_context(|| format!("writing {path}"))
        }
    }

    /// Finalize: write the manifest.
    ///
    /// When the primary output is a real file `P`, the manifest lands at
    /// `P.manifest.json`; when piping to stdout it goes to stderr so the
    /// primary stream stays clean.
    pub fn finish(self, primary_out: &str) -> Result<()> {
        let manifest = RunManifest {
            command: self.command,
            argv: std::env::args().collect(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            inputs: self.inputs,
            outputs: self.outputs,
            timing_outputs: self.timing_outputs,
            wall_ms: self.started.elapsed().as_millis(),
        };
        let mut body =
            serde_json::to_string_pretty(&manifest).context("serializing manifest")?;
        body.push('\n');
        if primary_out == STDIO {
            std::io::stderr()
                .write_all(body.as_bytes())
                .context("writing manifest to stderr")
        } else {
            let path = format!("{primary_out}.manifest.json");
            std::fs::write(&path, body).with_context(|| format!("writing {path}"))
        }
    }
}

/// Parse `NUM/DEN` (or a bare `NUM` meaning `NUM/1`) into a fraction.
pub fn parse_fraction(s: &str) -> Result<(u32, u32)> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num: u32 = num
        .trim()
        .parse()
        .with_context(|| format!("bad fraction numerator in {s:?}"))?;
    let den: u32 = den
        .trim()
        .parse()
        .with_context(|| format!("bad fraction denominator in {s:?}"))?;
    anyhow::ensure!(den > 0, "fraction denominator must be ≥ 1 in {s:?}");
    Ok((num, den))
}

/// Parse `LO,HI` (or bare `V` meaning `V,V`) into an inclusive range.
pub fn parse_range(s: &str) -> Result<(u64, u64)> {
    let (lo, hi) = match s.split_once(',') {
        Some((l, h)) => (l, h),
        None => (s, s),
    };
    let lo: u64 = lo.trim().parse().with_context(|| format!("bad range low in {s:?}"))?;
    let hi: u64 = hi.trim().parse().with_context(|| format!("bad range high in {s:?}"))?;
    anyhow::ensure!(lo <= hi, "range low must not exceed high in {s:?}");
    Ok((lo, hi))
}

/// Fixed-point decimal string for `num/den` with six fractional digits,
/// computed by integer long division (no floating point, reproducible).
pub fn ratio_string(num: u128, den: u128) -> String {
    if den == 0 {
        return if num == 0 { "1.000000".into() } else { "inf".into() };
    }
    let whole = num / den;
    let mut rem = num % den;
    let mut frac = String::with_capacity(6);
    for _ in 0..6 {
        rem *= 10;
        frac.push(char::from(b'0' + (rem / den) as u8));
        rem %= den;
    }
    format!("{whole}.{frac}")
}
