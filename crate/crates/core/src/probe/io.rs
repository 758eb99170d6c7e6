//! Binary representation and parameter files (little-endian throughout).
//!
//! Representations: `SPUDREPR`, u16 version, u32 d_h, then until end of
//! file per sentence: u16 id length, UTF-8 id, u32 word count and the
//! word vectors as row-major f32.
//!
//! Parameters: `SPUDPROB`, u32 d_h, u32 b, u32 label count, labels as u16
//! length + UTF-8, then `L` as labels x (d_h + 1) f32 with the bias in the
//! last column, then `B` as b x d_h f32.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, ErrorKind, Read, Write};
use std::path::Path;

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use ndarray::{Array1, Array2};

use super::{LabelInventory, ProbeError, ProbeParams, ReprSet};

const REPR_MAGIC: &[u8; 8] = b"SPUDREPR";
const PROB_MAGIC: &[u8; 8] = b"SPUDPROB";
const REPR_VERSION: u16 = 1;

fn format_err(path: &str, msg: impl Into<String>) -> ProbeError {
    ProbeError::Format {
        path: path.to_owned(),
        msg: msg.into(),
    }
}

fn io_err(path: &str) -> impl Fn(io::Error) -> ProbeError + '_ {
    move |source| {
        if source.kind() == ErrorKind::UnexpectedEof {
            format_err(path, "truncated file")
        } else {
            ProbeError::Io {
                path: path.to_owned(),
                source,
            }
        }
    }
}

fn read_string(r: &mut impl Read, path: &str) -> Result<String, ProbeError> {
    let len = r.read_u16::<LittleEndian>().map_err(io_err(path))? as usize;
    let mut buf = vec![0u8; len];
    r.read_exact(&mut buf).map_err(io_err(path))?;
    String::from_utf8(buf).map_err(|_| format_err(path, "string is not UTF-8"))
}

fn write_string(w: &mut impl Write, s: &str) -> io::Result<()> {
    let len = u16::try_from(s.len())
        .map_err(|_| io::Error::new(ErrorKind::InvalidInput, "string longer than 65535 bytes"))?;
    w.write_u16::<LittleEndian>(len)?;
    w.write_all(s.as_bytes())
}

fn read_matrix(
    r: &mut impl Read,
    rows: usize,
    cols: usize,
    path: &str,
) -> Result<Array2<f64>, ProbeError> {
    let mut buf = vec![0f32; rows * cols];
    r.read_f32_into::<LittleEndian>(&mut buf)
        .map_err(io_err(path))?;
    Ok(
        Array2::from_shape_vec((rows, cols), buf.into_iter().map(f64::from).collect())
            .expect("buffer matches shape"),
    )
}

fn write_matrix(w: &mut impl Write, m: &Array2<f64>) -> io::Result<()> {
    for &v in m.iter() {
        w.write_f32::<LittleEndian>(v as f32)?;
    }
    Ok(())
}

fn check_magic(r: &mut impl Read, magic: &[u8; 8], path: &str) -> Result<(), ProbeError> {
    let mut buf = [0u8; 8];
    r.read_exact(&mut buf).map_err(io_err(path))?;
    if &buf != magic {
        return Err(format_err(
            path,
            format!("bad magic, expected {}", String::from_utf8_lossy(magic)),
        ));
    }
    Ok(())
}

/// Read a representation stream. `path` is only used in messages.
pub fn read_reprs(mut r: impl Read, path: &str) -> Result<ReprSet, ProbeError> {
    check_magic(&mut r, REPR_MAGIC, path)?;
    let version = r.read_u16::<LittleEndian>().map_err(io_err(path))?;
    if version != REPR_VERSION {
        return Err(format_err(path, format!("unsupported version {version}")));
    }
    let d_h = r.read_u32::<LittleEndian>().map_err(io_err(path))? as usize;
    let mut set = ReprSet::new(d_h);
    loop {
        let len = match r.read_u16::<LittleEndian>() {
            Ok(len) => len as usize,
            Err(e) if e.kind() == ErrorKind::UnexpectedEof => break,
            Err(e) => return Err(io_err(path)(e)),
        };
        let mut id = vec![0u8; len];
        r.read_exact(&mut id).map_err(io_err(path))?;
        let id = String::from_utf8(id).map_err(|_| format_err(path, "sentence id is not UTF-8"))?;
        let n = r.read_u32::<LittleEndian>().map_err(io_err(path))? as usize;
        let m = read_matrix(&mut r, n, d_h, path)?;
        set.push(id, m)
            .map_err(|e| format_err(path, e.to_string()))?;
    }
    Ok(set)
}

pub fn write_reprs(mut w: impl Write, set: &ReprSet) -> io::Result<()> {
    w.write_all(REPR_MAGIC)?;
    w.write_u16::<LittleEndian>(REPR_VERSION)?;
    w.write_u32::<LittleEndian>(set.d_h() as u32)?;
    for s in set.sentences() {
        write_string(&mut w, &s.sent_id)?;
        w.write_u32::<LittleEndian>(s.vectors.nrows() as u32)?;
        write_matrix(&mut w, &s.vectors)?;
    }
    w.flush()
}

impl ReprSet {
    pub fn load(path: impl AsRef<Path>) -> Result<ReprSet, ProbeError> {
        let p = path.as_ref().display().to_string();
        let f = File::open(path.as_ref()).map_err(io_err(&p))?;
        read_reprs(BufReader::new(f), &p)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), ProbeError> {
        let p = path.as_ref().display().to_string();
        let f = File::create(path.as_ref()).map_err(io_err(&p))?;
        write_reprs(BufWriter::new(f), self).map_err(io_err(&p))
    }
}

pub fn read_params(mut r: impl Read, path: &str) -> Result<ProbeParams, ProbeError> {
    check_magic(&mut r, PROB_MAGIC, path)?;
    let d_h = r.read_u32::<LittleEndian>().map_err(io_err(path))? as usize;
    let b_dim = r.read_u32::<LittleEndian>().map_err(io_err(path))? as usize;
    let n_labels = r.read_u32::<LittleEndian>().map_err(io_err(path))? as usize;
    let labels = (0..n_labels)
        .map(|_| read_string(&mut r, path))
        .collect::<Result<Vec<_>, _>>()?;
    let labels = LabelInventory::new(labels).map_err(|e| format_err(path, e.to_string()))?;
    let lb = read_matrix(&mut r, n_labels, d_h + 1, path)?;
    let b = read_matrix(&mut r, b_dim, d_h, path)?;
    let mut extra = [0u8; 1];
    if r.read(&mut extra).map_err(io_err(path))? != 0 {
        return Err(format_err(path, "trailing bytes after parameters"));
    }
    Ok(ProbeParams {
        labels,
        l: lb.slice(ndarray::s![.., ..d_h]).to_owned(),
        l_bias: Array1::from_iter(lb.column(d_h).iter().copied()),
        b,
    })
}

pub fn write_params(mut w: impl Write, p: &ProbeParams) -> io::Result<()> {
    w.write_all(PROB_MAGIC)?;
    w.write_u32::<LittleEndian>(p.d_h() as u32)?;
    w.write_u32::<LittleEndian>(p.b_dim() as u32)?;
    w.write_u32::<LittleEndian>(p.labels.len() as u32)?;
    for l in p.labels.labels() {
        write_string(&mut w, l)?;
    }
    for (row, bias) in p.l.rows().into_iter().zip(&p.l_bias) {
        for &v in row {
            w.write_f32::<LittleEndian>(v as f32)?;
        }
        w.write_f32::<LittleEndian>(*bias as f32)?;
    }
    write_matrix(&mut w, &p.b)?;
    w.flush()
}

pub fn load_params(path: impl AsRef<Path>) -> Result<ProbeParams, ProbeError> {
    let p = path.as_ref().display().to_string();
    let f = File::open(path.as_ref()).map_err(io_err(&p))?;
    read_params(BufReader::new(f), &p)
}

pub fn save_params(path: impl AsRef<Path>, params: &ProbeParams) -> Result<(), ProbeError> {
    let p = path.as_ref().display().to_string();
    let f = File::create(path.as_ref()).map_err(io_err(&p))?;
    write_params(BufWriter::new(f), params).map_err(io_err(&p))
}
