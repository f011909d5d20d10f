//! Minimal NPY v1.0 reader/writer for 2-D arrays.
//!
//! Writing always emits little-endian `<f8` in C order; reading accepts the
//! common numeric dtypes and converts to `f64`. The format is described in
//! NEP 1; only the subset needed here is supported.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::{Error, Image2D, Result};

const MAGIC: &[u8; 6] = b"\x93NUMPY";

/// Loads a 2-D NPY file as an `Image2D`.
pub fn load_npy(path: impl AsRef<Path>) -> Result<Image2D> {
    let mut reader = BufReader::new(File::open(path.as_ref())?);
    read_image(&mut reader)
}

/// Saves an image as NPY v1.0 (`<f8`, C order).
pub fn save_npy(img: &Image2D, path: impl AsRef<Path>) -> Result<()> {
    let mut writer = BufWriter::new(File::create(path.as_ref())?);
    write_image(img, &mut writer)?;
    writer.flush()?;
    Ok(())
}

/// Reads an image from any byte stream positioned at the magic string.
pub fn read_image(reader: &mut impl Read) -> Result<Image2D> {
    let mut magic = [0u8; 6];
    reader.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Format("not an NPY file (bad magic string)".into()));
    }
    let mut version = [0u8; 2];
    reader.read_exact(&mut version)?;
    if version[0] != 1 || version[1] != 0 {
        return Err(Error::Format(format!(
            "unsupported NPY version {}.{}",
            version[0], version[1]
        )));
    }
    let mut len_bytes = [0u8; 2];
    reader.read_exact(&mut len_bytes)?;
    let header_len = u16::from_le_bytes(len_bytes) as usize;
    let mut header = vec![0u8; header_len];
    reader.read_exact(&mut header)?;
    let header = String::from_utf8_lossy(&header).to_string();

    let descr = extract_str_value(&header, "descr")?;
    let fortran = extract_bool_value(&header, "fortran_order")?;
    let shape = extract_shape(&header)?;

    if fortran {
        return Err(Error::Format("Fortran-order NPY is not supported".into()));
    }
    if shape.len() != 2 {
        return Err(Error::Shape(format!(
            "expected a 2-D array, found {}-D shape {:?}",
            shape.len(),
            shape
        )));
    }
    let (height, width) = (shape[0], shape[1]);
    if height == 0 || width == 0 {
        return Err(Error::Shape("empty array".into()));
    }

    let count = height * width;
    let data = read_values(reader, &descr, count)?;
    Image2D::from_vec(height, width, data)
}

/// Writes an image to any byte stream as NPY v1.0.
pub fn write_image(img: &Image2D, writer: &mut impl Write) -> Result<()> {
    let dict = format!(
        "{{'descr': '<f8', 'fortran_order': False, 'shape': ({}, {}), }}",
        img.height(),
        img.width()
    );
    // Total header (magic + version + len + dict + padding + newline) is
    // padded to a multiple of 64 bytes.
    let unpadded = MAGIC.len() + 2 + 2 + dict.len() + 1;
    let padding = (64 - unpadded % 64) % 64;
    let header_len = (dict.len() + padding + 1) as u16;

    writer.write_all(MAGIC)?;
    writer.write_all(&[1, 0])?;
    writer.write_all(&header_len.to_le_bytes())?;
    writer.write_all(dict.as_bytes())?;
    writer.write_all(&vec![b' '; padding])?;
    writer.write_all(b"\n")?;
    for &v in img.data() {
        writer.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

fn read_values(reader: &mut impl Read, descr: &str, count: usize) -> Result<Vec<f64>> {
    let item_size: usize = match descr {
        "<f8" => 8,
        "<f4" => 4,
        "<i8" => 8,
        "<i4" => 4,
        "<i2" => 2,
        "<u2" => 2,
        "|u1" | "<u1" => 1,
        "|i1" | "<i1" => 1,
        other => {
            return Err(Error::Format(format!("unsupported NPY dtype {other:?}")));
        }
    };
    let mut raw = vec![0u8; count * item_size];
    reader
        .read_exact(&mut raw)
        .map_err(|e| Error::Format(format!("truncated NPY payload: {e}")))?;
    let mut out = Vec::with_capacity(count);
    for chunk in raw.chunks_exact(item_size) {
        let v = match descr {
            "<f8" => f64::from_le_bytes(chunk.try_into().unwrap()),
            "<f4" => f32::from_le_bytes(chunk.try_into().unwrap()) as f64,
            "<i8" => i64::from_le_bytes(chunk.try_into().unwrap()) as f64,
            "<i4" => i32::from_le_bytes(chunk.try_into().unwrap()) as f64,
            "<i2" => i16::from_le_bytes(chunk.try_into().unwrap()) as f64,
            "<u2" => u16::from_le_bytes(chunk.try_into().unwrap()) as f64,
            "|u1" | "<u1" => chunk[0] as f64,
            "|i1" | "<i1" => chunk[0] as i8 as f64,
            _ => unreachable!(),
        };
        out.push(v);
    }
    Ok(out)
}

fn extract_str_value(header: &str, key: &str) -> Result<String> {
    let pos = header
        .find(&format!("'{key}'"))
        .ok_or_else(|| Error::Format(format!("NPY header missing {key:?}")))?;
    let rest = &header[pos + key.len() + 2..];
    let colon = rest
        .find(':')
        .ok_or_else(|| Error::Format("malformed NPY header".into()))?;
    let rest = rest[colon + 1..].trim_start();
    let quote = rest
        .chars()
        .next()
        .filter(|&c| c == '\'' || c == '"')
        .ok_or_else(|| Error::Format(format!("{key} value is not a string")))?;
    let rest = &rest[1..];
    let end = rest
        .find(quote)
        .ok_or_else(|| Error::Format("unterminated string in NPY header".into()))?;
    Ok(rest[..end].to_string())
}

fn extract_bool_value(header: &str, key: &str) -> Result<bool> {
    let pos = header
        .find(&format!("'{key}'"))
        .ok_or_else(|| Error::Format(format!("NPY header missing {key:?}")))?;
    let rest = &header[pos + key.len() + 2..];
    let colon = rest
        .find(':')
        .ok_or_else(|| Error::Format("malformed NPY header".into()))?;
    let rest = rest[colon + 1..].trim_start();
    if rest.starts_with("True") {
        Ok(true)
    } else if rest.starts_with("False") {
        Ok(false)
    } else {
        Err(Error::Format(format!("{key} value is not a boolean")))
    }
}

fn extract_shape(header: &str) -> Result<Vec<usize>> {
    let pos = header
        .find("'shape'")
        .ok_or_else(|| Error::Format("NPY header missing 'shape'".into()))?;
    let rest = &header[pos + 7..];
    let open = rest
        .find('(')
        .ok_or_else(|| Error::Format("malformed shape in NPY header".into()))?;
    let close = rest[open..]
        .find(')')
        .ok_or_else(|| Error::Format("malformed shape in NPY header".into()))?;
    let inner = &rest[open + 1..open + close];
    let mut dims = Vec::new();
    for part in inner.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        dims.push(
            part.parse::<usize>()
                .map_err(|_| Error::Format(format!("bad shape component {part:?}")))?,
        );
    }
    Ok(dims)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn npy_bytes(img: &Image2D) -> Vec<u8> {
        let mut buf = Vec::new();
        write_image(img, &mut buf).unwrap();
        buf
    }

    #[test]
    fn round_trip_is_bit_identical() {
        let img = Image2D::from_vec(2, 2, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let bytes = npy_bytes(&img);
        let back = read_image(&mut bytes.as_slice()).unwrap();
        assert_eq!(back, img);
        // save -> load -> save produces byte-identical output
        assert_eq!(npy_bytes(&back), bytes);
    }

    #[test]
    fn zero_image_payload_is_zero_bytes() {
        let img = Image2D::zeros(4, 4);
        let bytes = npy_bytes(&img);
        let payload = &bytes[bytes.len() - 16 * 8..];
        assert!(payload.iter().all(|&b| b == 0));
    }

    #[test]
    fn header_is_64_byte_aligned() {
        let bytes = npy_bytes(&Image2D::zeros(3, 7));
        assert_eq!((bytes.len() - 21 * 8) % 64, 0);
        assert_eq!(bytes[bytes.len() - 21 * 8 - 1], b'\n');
    }

    #[test]
    fn bad_magic_is_format_error() {
        let mut bytes = npy_bytes(&Image2D::zeros(2, 2));
        bytes[0] = b'X';
        assert!(matches!(
            read_image(&mut bytes.as_slice()),
            Err(Error::Format(_))
        ));
    }

    #[test]
    fn three_dimensional_file_is_shape_error() {
        let dict = "{'descr': '<f8', 'fortran_order': False, 'shape': (2, 2, 2), }";
        let mut bytes = Vec::new();
        bytes.extend_from_slice(MAGIC);
        bytes.extend_from_slice(&[1, 0]);
        let pad = (64 - (10 + dict.len() + 1) % 64) % 64;
        bytes.extend_from_slice(&((dict.len() + pad + 1) as u16).to_le_bytes());
        bytes.extend_from_slice(dict.as_bytes());
        bytes.extend(std::iter::repeat_n(b' ', pad));
        bytes.push(b'\n');
        bytes.extend_from_slice(&[0u8; 64]);
        assert!(matches!(
            read_image(&mut bytes.as_slice()),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn f32_payload_converts() {
        let dict = "{'descr': '<f4', 'fortran_order': False, 'shape': (1, 2), }";
        let mut bytes = Vec::new();
        bytes.extend_from_slice(MAGIC);
        bytes.extend_from_slice(&[1, 0]);
        bytes.extend_from_slice(&(dict.len() as u16 + 1).to_le_bytes());
        bytes.extend_from_slice(dict.as_bytes());
        bytes.push(b'\n');
        bytes.extend_from_slice(&1.5f32.to_le_bytes());
        bytes.extend_from_slice(&(-2.0f32).to_le_bytes());
        let img = read_image(&mut bytes.as_slice()).unwrap();
        assert_eq!(img.data(), &[1.5, -2.0]);
    }

    #[test]
    fn fortran_order_is_rejected() {
        let dict = "{'descr': '<f8', 'fortran_order': True, 'shape': (1, 1), }";
        let mut bytes = Vec::new();
        bytes.extend_from_slice(MAGIC);
        bytes.extend_from_slice(&[1, 0]);
        bytes.extend_from_slice(&(dict.len() as u16 + 1).to_le_bytes());
        bytes.extend_from_slice(dict.as_bytes());
        bytes.push(b'\n');
        bytes.extend_from_slice(&1.0f64.to_le_bytes());
        assert!(matches!(
            read_image(&mut bytes.as_slice()),
            Err(Error::Format(_))
        ));
    }

    #[test]
    fn save_to_unwritable_path_is_io_error() {
        let img = Image2D::zeros(2, 2);
        let err = save_npy(&img, "/nonexistent-dir/out.npy").unwrap_err();
        assert!(matches!(err, Error::Io(_)));
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("img.npy");
        let img = Image2D::from_fn(5, 3, |y, x| (y as f64).sin() + x as f64);
        save_npy(&img, &path).unwrap();
        assert_eq!(load_npy(&path).unwrap(), img);
    }
}
