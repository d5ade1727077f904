//! Field files (`NLSF1`) and on-disk trajectories.
//!
//! A field file is the 5-byte magic `NLSF1`, then `d`, `n`, `L` (as f64
//! bits) and the representation tag (0 physical, 1 spectral) as 64-bit
//! little-endian words, followed by `n^d` interleaved re/im f64 values in
//! row-major order.

use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolution::{EvolutionConfig, Trajectory};
use crate::spectral::{Field, GridSpec, Representation};

pub const MAGIC: &[u8; 5] = b"NLSF1";

pub fn write_field_to<W: Write>(field: &Field, w: &mut W) -> Result<()> {
    let g = field.grid();
    w.write_all(MAGIC)?;
    w.write_all(&(g.dim() as u64).to_le_bytes())?;
    w.write_all(&(g.n() as u64).to_le_bytes())?;
    w.write_all(&g.length().to_bits().to_le_bytes())?;
    let tag: u64 = match field.rep() {
        Representation::Physical => 0,
        Representation::Spectral => 1,
    };
    w.write_all(&tag.to_le_bytes())?;
    let mut buf = Vec::with_capacity(16 * field.data().len());
    for v in field.data() {
        buf.extend_from_slice(&v.re.to_le_bytes());
        buf.extend_from_slice(&v.im.to_le_bytes());
    }
    w.write_all(&buf)?;
    Ok(())
}

pub fn read_field_from<R: Read>(r: &mut R) -> Result<Field> {
    let mut magic = [0u8; 5];
    r.read_exact(&mut magic).map_err(|_| Error::Format("truncated header".into()))?;
    if &magic != MAGIC {
        return Err(Error::Format(format!("bad magic {magic:?}")));
    }
    let mut word = || -> Result<u64> {
        let mut b = [0u8; 8];
        r.read_exact(&mut b).map_err(|_| Error::Format("truncated header".into()))?;
        Ok(u64::from_le_bytes(b))
    };
    let dim = word()? as usize;
    let n = word()? as usize;
    let length = f64::from_bits(word()?);
    let rep = match word()? {
        0 => Representation::Physical,
        1 => Representation::Spectral,
        t => return Err(Error::Format(format!("unknown representation tag {t}"))),
    };
    let grid = GridSpec::new(n, length, dim).map_err(|e| Error::Format(format!("bad grid header: {e}")))?;
    let mut bytes = vec![0u8; 16 * grid.len()];
    r.read_exact(&mut bytes).map_err(|_| Error::Format(format!("expected {} values", grid.len())))?;
    let mut rest = [0u8; 1];
    if r.read(&mut rest)? != 0 {
        return Err(Error::Format("trailing bytes after field data".into()));
    }
    let data = bytes
        .chunks_exact(16)
        .map(|c| {
            Complex64::new(
                f64::from_le_bytes(c[..8].try_into().unwrap()),
                f64::from_le_bytes(c[8..].try_into().unwrap()),
            )
        })
        .collect();
    Field::new(grid, rep, data)
}

pub fn write_field(field: &Field, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_field_to(field, &mut w)?;
    w.flush()?;
    Ok(())
}

pub fn read_field(path: &Path) -> Result<Field> {
    read_field_from(&mut BufReader::new(File::open(path)?))
}

/// Trajectory metadata stored next to the checkpoint files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryMeta {
    pub grid: GridSpec,
    pub times: Vec<f64>,
    pub config: EvolutionConfig,
    pub guard_violations: usize,
    pub files: Vec<String>,
}

pub const TRAJECTORY_META: &str = "trajectory.json";

fn checkpoint_name(i: usize) -> String {
    format!("checkpoint_{i:05}.nlsf")
}

/// Writes `dir/trajectory.json` and one field file per checkpoint.
pub fn save_trajectory(traj: &Trajectory, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    let files: Vec<String> = (0..traj.len()).map(checkpoint_name).collect();
    for (f, name) in traj.checkpoints.iter().zip(&files) {
        write_field(f, &dir.join(name))?;
    }
    let meta = TrajectoryMeta {
        grid: *traj.grid(),
        times: traj.times.clone(),
        config: traj.config,
        guard_violations: traj.guard_violations,
        files,
    };
    write_json(&meta, &dir.join(TRAJECTORY_META))
}

pub fn load_trajectory(dir: &Path) -> Result<Trajectory> {
    let meta: TrajectoryMeta = read_json(&dir.join(TRAJECTORY_META))?;
    if meta.files.len() != meta.times.len() || meta.files.is_empty() {
        return Err(Error::Format(format!("{} lists {} files for {} times", TRAJECTORY_META, meta.files.len(), meta.times.len())));
    }
    let checkpoints = meta
        .files
        .iter()
        .map(|name| {
            let f = read_field(&dir.join(name))?;
            f.grid().check_same(&meta.grid)?;
            Ok(f.to_physical())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Trajectory { times: meta.times, checkpoints, config: meta.config, guard_violations: meta.guard_violations })
}

pub fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::Format(e.to_string()))?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
}

/// `dir/seed_<seed>`.
pub fn seed_dir(root: &Path, seed: u64) -> PathBuf {
    root.join(format!("seed_{seed}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolution::{evolve, EvolutionConfig};

    fn sample(grid: GridSpec) -> Field {
        Field::from_position_fn(grid, |x| Complex64::new(x[0].sin() + 0.1, (x[1] - x[2]).cos()))
    }

    #[test]
    fn bit_exact_round_trip() {
        for grid in [GridSpec::cube(8, 3.5).unwrap(), GridSpec::new(32, 1.0 / 3.0, 1).unwrap()] {
            for f in [sample(grid), sample(grid).to_spectral()] {
                let mut buf = Vec::new();
                write_field_to(&f, &mut buf).unwrap();
                assert_eq!(buf.len(), 5 + 32 + 16 * grid.len());
                assert_eq!(&buf[..5], b"NLSF1");
                let g = read_field_from(&mut buf.as_slice()).unwrap();
                assert_eq!(g.rep(), f.rep());
                assert_eq!(g.grid(), f.grid());
                assert!(g.data().iter().zip(f.data()).all(|(a, b)| a.re.to_bits() == b.re.to_bits() && a.im.to_bits() == b.im.to_bits()));
            }
        }
    }

    #[test]
    fn rejects_corrupt_files() {
        let f = sample(GridSpec::cube(8, 2.0).unwrap());
        let mut buf = Vec::new();
        write_field_to(&f, &mut buf).unwrap();
        let mut bad = buf.clone();
        bad[0] = b'X';
        assert!(matches!(read_field_from(&mut bad.as_slice()), Err(Error::Format(_))));
        assert!(matches!(read_field_from(&mut &buf[..buf.len() - 1]), Err(Error::Format(_))));
        let mut long = buf.clone();
        long.push(0);
        assert!(matches!(read_field_from(&mut long.as_slice()), Err(Error::Format(_))));
        let mut tag = buf.clone();
        tag[5 + 24] = 7;
        assert!(matches!(read_field_from(&mut tag.as_slice()), Err(Error::Format(_))));
    }

    #[test]
    fn trajectory_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let traj = evolve(&sample(GridSpec::cube(8, 4.0).unwrap()), &EvolutionConfig::new(0.01, 0.05, 2)).unwrap();
        save_trajectory(&traj, dir.path()).unwrap();
        let back = load_trajectory(dir.path()).unwrap();
        assert_eq!(back.times, traj.times);
        assert_eq!(back.config, traj.config);
        for (a, b) in back.checkpoints.iter().zip(&traj.checkpoints) {
            assert_eq!(a.data(), b.data());
        }
    }
}
