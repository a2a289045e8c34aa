//! Batch front end: run configurations, command dispatch and table output.
//!
//! Configuration files are flat `key = value` text with `#` comments.
//! Recognised keys:
//!
//! | key         | meaning                                             |
//! |-------------|-----------------------------------------------------|
//! | `potential` | `bbjs` (default), `anharmonic` or `tabulated`       |
//! | `V0`, `lambda` | BBJS strength and inverse length (`lambda` = 1)  |
//! | `k`, `g`, `N`  | anharmonic force constant, strength, odd power   |
//! | `table`     | CSV file with header `r,V` for tabulated potentials |
//! | `n`         | resonance index for `refine`, `siegert`, `darboux`  |
//! | `h`, `rmax` | shooting step and outer radius                      |
//! | `out`       | output directory                                    |

use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::darboux::PartnerPotential;
use crate::error::{ResonanceError, Result};
use crate::potential::{Potential, TabulatedPotential};
use crate::siegert::{ComplexEnergy, Shooter, DEFAULT_R_MAX, DEFAULT_STEP};
use crate::wkb::{count_resonances, resonance, resonance_spectrum, Resonance};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Summit,
    Count,
    Wkb,
    Refine,
    Siegert,
    Darboux,
    Tables,
}

impl std::str::FromStr for Command {
    type Err = ResonanceError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "summit" => Command::Summit,
            "count" => Command::Count,
            "wkb" => Command::Wkb,
            "refine" => Command::Refine,
            "siegert" => Command::Siegert,
            "darboux" => Command::Darboux,
            "tables" => Command::Tables,
            other => return Err(ResonanceError::Config(format!("unknown command `{other}`"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PotentialKind {
    #[default]
    Bbjs,
    Anharmonic,
    Tabulated,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub kind: PotentialKind,
    pub strength: Option<f64>,
    pub inverse_length: f64,
    pub force_constant: Option<f64>,
    pub anharmonicity: Option<f64>,
    pub power: u32,
    pub table: Option<PathBuf>,
    pub index: Option<usize>,
    pub step: f64,
    pub r_max: f64,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            kind: PotentialKind::Bbjs,
            strength: None,
            inverse_length: 1.0,
            force_constant: None,
            anharmonicity: None,
            power: 3,
            table: None,
            index: None,
            step: DEFAULT_STEP,
            r_max: DEFAULT_R_MAX,
            out: None,
        }
    }

    /// Parses a config file body; later keys override earlier ones.
    pub fn parse(command: Command, text: &str) -> Result<Self> {
        let mut cfg = Self::new(command);
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                ResonanceError::Config(format!("line {}: expected `key = value`", lineno + 1))
            })?;
            cfg.set(key.trim(), value.trim())?;
        }
        Ok(cfg)
    }

    pub fn load(command: Command, path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ResonanceError::Config(format!("{}: {e}", path.display())))?;
        Self::parse(command, &text)
    }

    /// Sets one key; unknown keys and non-positive numbers are rejected.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let positive = |v: &str| -> Result<f64> {
            match v.parse::<f64>() {
                Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
                _ => Err(ResonanceError::Config(format!(
                    "key `{key}`: expected a positive number, got `{v}`"
                ))),
            }
        };
        match key {
            "potential" => {
                self.kind = match value {
                    "bbjs" => PotentialKind::Bbjs,
                    "anharmonic" => PotentialKind::Anharmonic,
                    "tabulated" => PotentialKind::Tabulated,
                    _ => {
                        return Err(ResonanceError::Config(format!(
                            "key `potential`: unknown family `{value}`"
                        )))
                    }
                }
            }
            "V0" => self.strength = Some(positive(value)?),
            "lambda" => self.inverse_length = positive(value)?,
            "k" => self.force_constant = Some(positive(value)?),
            "g" => self.anharmonicity = Some(positive(value)?),
            "N" => {
                self.power = value.parse().map_err(|_| {
                    ResonanceError::Config(format!("key `N`: expected an odd integer, got `{value}`"))
                })?
            }
            "table" => self.table = Some(PathBuf::from(value)),
            "n" => {
                self.index = Some(value.parse().map_err(|_| {
                    ResonanceError::Config(format!("key `n`: expected a non-negative integer, got `{value}`"))
                })?)
            }
            "h" => self.step = positive(value)?,
            "rmax" => self.r_max = positive(value)?,
            "out" => self.out = Some(PathBuf::from(value)),
            _ => return Err(ResonanceError::Config(format!("unknown key `{key}`"))),
        }
        Ok(())
    }

    pub fn potential(&self) -> Result<Potential> {
        let missing = |k: &str| ResonanceError::Config(format!("missing key `{k}`"));
        match self.kind {
            PotentialKind::Bbjs => {
                Potential::bbjs(self.strength.ok_or_else(|| missing("V0"))?, self.inverse_length)
            }
            PotentialKind::Anharmonic => Potential::anharmonic(
                self.force_constant.ok_or_else(|| missing("k"))?,
                self.anharmonicity.ok_or_else(|| missing("g"))?,
                self.power,
            ),
            PotentialKind::Tabulated => {
                let path = self.table.as_ref().ok_or_else(|| missing("table"))?;
                TabulatedPotential::from_csv_path(path).map(Potential::Tabulated)
            }
        }
    }

    fn out_dir(&self) -> Result<PathBuf> {
        let dir = self.out.clone().unwrap_or_else(|| PathBuf::from("."));
        std::fs::create_dir_all(&dir)
            .map_err(|e| ResonanceError::Config(format!("{}: {e}", dir.display())))?;
        Ok(dir)
    }

    fn shooter(&self) -> Shooter {
        Shooter::new(self.step, self.r_max)
    }
}

/// `%g`-style formatting with six significant digits.
pub fn fmt_g6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    let sci = format!("{x:.5e}");
    // rounding can bump the exponent, e.g. 9.999996 -> 1.00000e1
    let exp = sci
        .split('e')
        .nth(1)
        .and_then(|e| e.parse::<i32>().ok())
        .unwrap_or(exp);
    if (-5..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        let (mantissa, e) = sci.split_once('e').unwrap();
        let mantissa = mantissa.trim_end_matches('0').trim_end_matches('.');
        let e: i32 = e.parse().unwrap();
        format!("{mantissa}e{}{:02}", if e < 0 { '-' } else { '+' }, e.abs())
    }
}

fn full(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_complex(z: ComplexEnergy) -> String {
    let sign = if z.im < 0.0 { '-' } else { '+' };
    format!("{} {sign} i{}", fmt_g6(z.re), fmt_g6(z.im.abs()))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| ResonanceError::Config(format!("{}: {e}", path.display())))
}

fn io_err(e: impl std::fmt::Display) -> ResonanceError {
    ResonanceError::Config(e.to_string())
}

/// Writes the spectrum schema `n,re_e,half_width,tau,tau_gamma,valid`.
pub fn write_spectrum_csv<W: Write>(out: W, spectrum: &[Resonance]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["n", "re_e", "half_width", "tau", "tau_gamma", "valid"])
        .map_err(io_err)?;
    for r in spectrum {
        w.write_record([
            r.index.to_string(),
            full(r.position),
            full(r.half_width),
            full(r.period),
            full(r.validity_ratio),
            r.is_valid().to_string(),
        ])
        .map_err(io_err)?;
    }
    w.flush().map_err(io_err)
}

/// Fixed-width spectrum table with six significant digits.
pub fn format_spectrum(spectrum: &[Resonance]) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:>3} {:>13} {:>13} {:>13} {:>13} {:>6}",
        "n", "re_e", "half_width", "tau", "tau_gamma", "valid"
    );
    for r in spectrum {
        let _ = writeln!(
            s,
            "{:>3} {:>13.5e} {:>13.5e} {:>13.5e} {:>13.5e} {:>6}",
            r.index,
            r.position,
            r.half_width,
            r.period,
            r.validity_ratio,
            if r.is_valid() { "yes" } else { "NO" }
        );
    }
    s
}

fn seeds(cfg: &RunConfig, p: &Potential) -> Result<Vec<Resonance>> {
    match cfg.index {
        Some(n) => Ok(vec![resonance(p, n)?]),
        None => resonance_spectrum(p),
    }
}

fn refined_solution(cfg: &RunConfig, p: &Potential) -> Result<(Resonance, ComplexEnergy)> {
    let r = resonance(p, cfg.index.unwrap_or(0))?;
    let refined = cfg.shooter().refine(p, r.eigenvalue().into())?;
    Ok((r, refined.energy))
}

/// Executes one command, printing to `stdout` and writing files under `out`.
pub fn run<W: Write>(cfg: &RunConfig, stdout: &mut W) -> Result<()> {
    match cfg.command {
        Command::Summit => {
            let s = cfg.potential()?.barrier_summit()?;
            writeln!(stdout, "r_top={}, v_max={}", fmt_g6(s.r_top), fmt_g6(s.v_max)).map_err(io_err)?;
        }
        Command::Count => {
            let n = count_resonances(&cfg.potential()?)?;
            writeln!(stdout, "{n}").map_err(io_err)?;
        }
        Command::Wkb => {
            let spectrum = resonance_spectrum(&cfg.potential()?)?;
            write!(stdout, "{}", format_spectrum(&spectrum)).map_err(io_err)?;
            if cfg.out.is_some() {
                let path = cfg.out_dir()?.join("spectrum.csv");
                write_spectrum_csv(create(&path)?, &spectrum)?;
            }
        }
        Command::Refine => {
            let p = cfg.potential()?;
            let shooter = cfg.shooter();
            for r in seeds(cfg, &p)? {
                let refined = shooter.refine(&p, r.eigenvalue().into())?;
                writeln!(
                    stdout,
                    "n={} wkb={} -> siegert={} ({} iterations)",
                    r.index,
                    fmt_complex(r.eigenvalue().into()),
                    fmt_complex(refined.energy),
                    refined.iterations
                )
                .map_err(io_err)?;
            }
        }
        Command::Siegert => {
            let p = cfg.potential()?;
            let (_, eps) = refined_solution(cfg, &p)?;
            let w = cfg.shooter().integrate(&p, eps)?;
            let path = cfg.out_dir()?.join("wavefunction.csv");
            w.write_csv(create(&path)?).map_err(io_err)?;
            writeln!(stdout, "eps={} -> {}", fmt_complex(eps), path.display()).map_err(io_err)?;
        }
        Command::Darboux => {
            let p = cfg.potential()?;
            let (_, eps) = refined_solution(cfg, &p)?;
            let w = cfg.shooter().integrate(&p, eps)?;
            let partner = PartnerPotential::build(&p, &w)?;
            let path = cfg.out_dir()?.join("partner.csv");
            partner.write_csv(create(&path)?).map_err(io_err)?;
            writeln!(
                stdout,
                "eps={} tail |V2-V|={} -> {}",
                fmt_complex(eps),
                fmt_g6(partner.tail_deviation()),
                path.display()
            )
            .map_err(io_err)?;
        }
        Command::Tables => {
            let dir = cfg.out_dir()?;
            let files = tables::write_all(&dir, cfg.shooter())?;
            for f in files {
                writeln!(stdout, "{}", f.display()).map_err(io_err)?;
            }
        }
    }
    Ok(())
}

/// Regeneration of the BBJS benchmark tables and the anharmonic example.
pub mod tables {
    use super::*;
    use crate::wkb::count_resonances_bbjs;

    pub const TABLE1_STRENGTHS: [f64; 3] = [15.0, 30.0, 45.0];
    pub const TABLE2_STRENGTH: f64 = 350.0;
    pub const TABLE3_STRENGTHS: [f64; 5] = [15.0, 60.0, 150.0, 250.0, 350.0];

    /// Writes `table1.csv`, `table2.csv`, `table3.csv` and `mur_popov.csv`.
    pub fn write_all(dir: &Path, shooter: Shooter) -> Result<Vec<PathBuf>> {
        let results: Vec<Result<PathBuf>> = std::thread::scope(|s| {
            let jobs = [
                s.spawn(|| table1(&dir.join("table1.csv"), shooter)),
                s.spawn(|| table2(&dir.join("table2.csv"))),
                s.spawn(|| table3(&dir.join("table3.csv"))),
                s.spawn(|| mur_popov(&dir.join("mur_popov.csv"))),
            ];
            jobs.into_iter().map(|j| j.join().expect("table worker panicked")).collect()
        });
        results.into_iter().collect()
    }

    fn table1(path: &Path, shooter: Shooter) -> Result<PathBuf> {
        let mut w = csv::Writer::from_writer(create(path)?);
        w.write_record(["V0", "v_max", "re_e", "half_width", "siegert_re", "siegert_im"])
            .map_err(io_err)?;
        for v0 in TABLE1_STRENGTHS {
            let p = Potential::bbjs(v0, 1.0)?;
            let r = resonance(&p, 0)?;
            let refined = shooter.refine(&p, r.eigenvalue().into())?.energy;
            w.write_record([
                full(v0),
                full(p.barrier_summit()?.v_max),
                full(r.position),
                full(r.half_width),
                full(refined.re),
                full(refined.im),
            ])
            .map_err(io_err)?;
        }
        w.flush().map_err(io_err)?;
        Ok(path.to_path_buf())
    }

    fn table2(path: &Path) -> Result<PathBuf> {
        let spectrum = resonance_spectrum(&Potential::bbjs(TABLE2_STRENGTH, 1.0)?)?;
        write_spectrum_csv(create(path)?, &spectrum)?;
        Ok(path.to_path_buf())
    }

    fn table3(path: &Path) -> Result<PathBuf> {
        let mut w = csv::Writer::from_writer(create(path)?);
        w.write_record(["V0", "n", "v_max", "re_e", "half_width"])
            .map_err(io_err)?;
        for v0 in TABLE3_STRENGTHS {
            let p = Potential::bbjs(v0, 1.0)?;
            let r = resonance(&p, 0)?;
            w.write_record([
                full(v0),
                count_resonances_bbjs(v0).to_string(),
                full(p.barrier_summit()?.v_max),
                full(r.position),
                full(r.half_width),
            ])
            .map_err(io_err)?;
        }
        w.flush().map_err(io_err)?;
        Ok(path.to_path_buf())
    }

    fn mur_popov(path: &Path) -> Result<PathBuf> {
        let p = Potential::anharmonic(800.0, 400.0, 3)?;
        let v_max = p.barrier_summit()?.v_max;
        let mut w = csv::Writer::from_writer(create(path)?);
        w.write_record(["k", "g", "N", "v_max", "n", "re_e", "half_width", "tau", "tau_gamma", "valid"])
            .map_err(io_err)?;
        for r in resonance_spectrum(&p)? {
            w.write_record([
                full(800.0),
                full(400.0),
                "3".to_string(),
                full(v_max),
                r.index.to_string(),
                full(r.position),
                full(r.half_width),
                full(r.period),
                full(r.validity_ratio),
                r.is_valid().to_string(),
            ])
            .map_err(io_err)?;
        }
        w.flush().map_err(io_err)?;
        Ok(path.to_path_buf())
    }
}
