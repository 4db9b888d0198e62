//! 8-bit PGM reading (binary P5 and ASCII P2) and binary P5 writing.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::image::GrayImage;

struct Header {
    ascii: bool,
    width: usize,
    height: usize,
    maxval: u32,
    data_start: usize,
}

fn malformed(path: &Path, reason: impl Into<String>) -> Error {
    Error::MalformedPgm {
        path: path.to_path_buf(),
        reason: reason.into(),
    }
}

/// Reads one whitespace-delimited header token, skipping `#` comments.
fn next_token<'a>(bytes: &'a [u8], pos: &mut usize) -> Option<&'a [u8]> {
    loop {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
        if *pos < bytes.len() && bytes[*pos] == b'#' {
            while *pos < bytes.len() && bytes[*pos] != b'\n' && bytes[*pos] != b'\r' {
                *pos += 1;
            }
            continue;
        }
        break;
    }
    let start = *pos;
    while *pos < bytes.len() && !bytes[*pos].is_ascii_whitespace() && bytes[*pos] != b'#' {
        *pos += 1;
    }
    (start < *pos).then(|| &bytes[start..*pos])
}

fn parse_number(bytes: &[u8], pos: &mut usize, what: &str, path: &Path) -> Result<u32> {
    let token = next_token(bytes, pos).ok_or_else(|| malformed(path, format!("missing {what}")))?;
    std::str::from_utf8(token)
        .ok()
        .and_then(|s| s.parse::<u32>().ok())
        .ok_or_else(|| {
            malformed(
                path,
                format!("invalid {what} '{}'", String::from_utf8_lossy(token)),
            )
        })
}

fn parse_header(bytes: &[u8], path: &Path) -> Result<Header> {
    let mut pos = 0;
    let ascii = match next_token(bytes, &mut pos) {
        Some(b"P5") => false,
        Some(b"P2") => true,
        Some(other) => {
            return Err(malformed(
                path,
                format!(
                    "unsupported magic '{}' (expected P5 or P2)",
                    String::from_utf8_lossy(other)
                ),
            ))
        }
        None => return Err(malformed(path, "empty file")),
    };
    let width = parse_number(bytes, &mut pos, "width", path)? as usize;
    let height = parse_number(bytes, &mut pos, "height", path)? as usize;
    let maxval = parse_number(bytes, &mut pos, "maxval", path)?;
    if width == 0 || height == 0 {
        return Err(malformed(path, format!("zero dimension {width}x{height}")));
    }
    if maxval == 0 {
        return Err(malformed(path, "maxval must be positive"));
    }
    if maxval > 255 {
        return Err(Error::SixteenBitPgm {
            path: path.to_path_buf(),
            maxval,
        });
    }
    // exactly one whitespace byte separates the header from binary data
    if pos >= bytes.len() && !ascii {
        return Err(malformed(path, "missing pixel data"));
    }
    Ok(Header {
        ascii,
        width,
        height,
        maxval,
        data_start: pos + 1,
    })
}

/// Decodes PGM bytes. `path` is used only for error messages.
pub fn decode_pgm(bytes: &[u8], path: &Path) -> Result<GrayImage> {
    let header = parse_header(bytes, path)?;
    let count = header
        .width
        .checked_mul(header.height)
        .ok_or_else(|| malformed(path, "dimensions overflow"))?;
    let pixels = if header.ascii {
        let mut pos = header.data_start.min(bytes.len());
        let mut pixels = Vec::with_capacity(count);
        for i in 0..count {
            let v = parse_number(bytes, &mut pos, &format!("pixel {i}"), path)?;
            if v > header.maxval {
                return Err(malformed(
                    path,
                    format!("pixel {i} value {v} exceeds maxval {}", header.maxval),
                ));
            }
            pixels.push(v as u8);
        }
        pixels
    } else {
        let data = bytes.get(header.data_start..).unwrap_or(&[]);
        if data.len() < count {
            return Err(malformed(
                path,
                format!("truncated pixel data: {} of {count} bytes", data.len()),
            ));
        }
        let pixels = data[..count].to_vec();
        if let Some(i) = pixels.iter().position(|&v| v as u32 > header.maxval) {
            return Err(malformed(
                path,
                format!("pixel {i} exceeds maxval {}", header.maxval),
            ));
        }
        pixels
    };
    GrayImage::new(header.width, header.height, pixels)
}

pub fn read_pgm(path: impl AsRef<Path>) -> Result<GrayImage> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    decode_pgm(&bytes, path)
}

/// Binary P5 encoding with maxval 255.
pub fn encode_pgm(img: &GrayImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", img.width(), img.height()).into_bytes();
    out.extend_from_slice(img.pixels());
    out
}

pub fn write_pgm(img: &GrayImage, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, encode_pgm(img)).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}
