//! Netpbm rasters: PGM (`P2`/`P5`) and PPM (`P3`/`P6`), with comments.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};

/// A grayscale or RGB raster with samples in `0..=maxval`, rows top to bottom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Raster {
    pub width: usize,
    pub height: usize,
    /// 1 for PGM, 3 for PPM.
    pub channels: usize,
    pub maxval: u16,
    pub samples: Vec<u16>,
    /// Comment lines without the leading `#`.
    pub comments: Vec<String>,
}

impl Raster {
    pub fn gray(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        Self::new(width, height, 1, 255, pixels.into_iter().map(u16::from).collect())
    }

    pub fn new(width: usize, height: usize, channels: usize, maxval: u16, samples: Vec<u16>) -> Result<Self> {
        if channels != 1 && channels != 3 {
            return Err(Error::Image(format!("{channels} channels")));
        }
        if maxval == 0 {
            return Err(Error::Image("maxval 0".into()));
        }
        if samples.len() != width * height * channels {
            return Err(Error::Image(format!(
                "{} samples for {width}x{height}x{channels}",
                samples.len()
            )));
        }
        if let Some(s) = samples.iter().find(|&&s| s > maxval) {
            return Err(Error::Image(format!("sample {s} exceeds maxval {maxval}")));
        }
        Ok(Self {
            width,
            height,
            channels,
            maxval,
            samples,
            comments: Vec::new(),
        })
    }

    pub fn with_comment(mut self, comment: impl Into<String>) -> Self {
        self.comments.push(comment.into());
        self
    }

    /// Pixel as a slice of `channels` samples.
    pub fn pixel(&self, col: usize, row: usize) -> &[u16] {
        let i = (row * self.width + col) * self.channels;
        &self.samples[i..i + self.channels]
    }

    /// Intensity in `[0, 1]`; RGB pixels average their channels.
    pub fn intensity(&self, col: usize, row: usize) -> f64 {
        let p = self.pixel(col, row);
        p.iter().map(|&s| f64::from(s)).sum::<f64>() / (p.len() as f64 * f64::from(self.maxval))
    }

    /// Binary netpbm (`P5` or `P6`).
    pub fn write<W: Write>(&self, mut w: W) -> Result<()> {
        let magic = if self.channels == 1 { "P5" } else { "P6" };
        writeln!(w, "{magic}")?;
        for c in &self.comments {
            for line in c.lines() {
                writeln!(w, "# {line}")?;
            }
        }
        writeln!(w, "{} {}", self.width, self.height)?;
        writeln!(w, "{}", self.maxval)?;
        if self.maxval < 256 {
            let bytes: Vec<u8> = self.samples.iter().map(|&s| s as u8).collect();
            w.write_all(&bytes)?;
        } else {
            let bytes: Vec<u8> = self.samples.iter().flat_map(|s| s.to_be_bytes()).collect();
            w.write_all(&bytes)?;
        }
        Ok(())
    }

    /// Plain or binary PGM/PPM.
    pub fn read<R: BufRead>(mut r: R) -> Result<Self> {
        let mut data = Vec::new();
        r.read_to_end(&mut data)?;
        let mut pos = 0;
        let mut comments = Vec::new();
        let magic = next_token(&data, &mut pos, &mut comments)?;
        let (channels, binary) = match magic.as_str() {
            "P2" => (1, false),
            "P3" => (3, false),
            "P5" => (1, true),
            "P6" => (3, true),
            other => return Err(Error::Image(format!("unsupported magic `{other}`"))),
        };
        let width = parse_header(&next_token(&data, &mut pos, &mut comments)?)?;
        let height = parse_header(&next_token(&data, &mut pos, &mut comments)?)?;
        let maxval = parse_header(&next_token(&data, &mut pos, &mut comments)?)?;
        if maxval == 0 || maxval > 65535 {
            return Err(Error::Image(format!("maxval {maxval}")));
        }
        let count = width * height * channels;
        let samples = if binary {
            // exactly one whitespace byte separates the header from the raster
            pos += 1;
            let bytes = if maxval < 256 { 1 } else { 2 };
            let body = data
                .get(pos..pos + count * bytes)
                .ok_or_else(|| Error::Image("truncated raster".into()))?;
            if bytes == 1 {
                body.iter().map(|&b| u16::from(b)).collect()
            } else {
                body.chunks(2).map(|c| u16::from_be_bytes([c[0], c[1]])).collect()
            }
        } else {
            (0..count)
                .map(|_| {
                    let t = next_token(&data, &mut pos, &mut comments)?;
                    t.parse::<u16>().map_err(|e| Error::Image(format!("sample `{t}`: {e}")))
                })
                .collect::<Result<Vec<_>>>()?
        };
        let mut raster = Self::new(width, height, channels, maxval as u16, samples)?;
        raster.comments = comments;
        Ok(raster)
    }
}

fn parse_header(t: &str) -> Result<usize> {
    t.parse().map_err(|e| Error::Image(format!("header field `{t}`: {e}")))
}

fn next_token(data: &[u8], pos: &mut usize, comments: &mut Vec<String>) -> Result<String> {
    loop {
        while *pos < data.len() && data[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
        if *pos < data.len() && data[*pos] == b'#' {
            let start = *pos + 1;
            while *pos < data.len() && data[*pos] != b'\n' {
                *pos += 1;
            }
            comments.push(String::from_utf8_lossy(&data[start..*pos]).trim().to_string());
            continue;
        }
        break;
    }
    let start = *pos;
    while *pos < data.len() && !data[*pos].is_ascii_whitespace() && data[*pos] != b'#' {
        *pos += 1;
    }
    if start == *pos {
        return Err(Error::Image("unexpected end of header".into()));
    }
    Ok(String::from_utf8_lossy(&data[start..*pos]).into_owned())
}

/// `v` in `[lo, hi]` to `0..=255`, clamped and rounded.
pub fn quantize(v: f64, lo: f64, hi: f64) -> u8 {
    let span = if hi > lo { hi - lo } else { 1.0 };
    ((v - lo) / span * 255.0).round().clamp(0.0, 255.0) as u8
}
