//! Rectangular region of interest in pixel coordinates.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Axis-aligned rectangle; `(x0, y0)` is the top-left corner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Roi {
    pub x0: usize,
    pub y0: usize,
    pub width: usize,
    pub height: usize,
}

impl Roi {
    pub fn new(x0: usize, y0: usize, width: usize, height: usize) -> Self {
        Self { x0, y0, width, height }
    }

    /// One-past-the-end column.
    pub fn right(&self) -> usize {
        self.x0 + self.width
    }

    /// One-past-the-end row.
    pub fn bottom(&self) -> usize {
        self.y0 + self.height
    }

    pub fn area(&self) -> usize {
        self.width * self.height
    }

    pub fn contains(&self, y: usize, x: usize) -> bool {
        x >= self.x0 && x < self.right() && y >= self.y0 && y < self.bottom()
    }

    /// Checks the rectangle is non-empty and lies fully inside an
    /// `image_height` x `image_width` image.
    pub fn validate_for(&self, image_height: usize, image_width: usize) -> Result<()> {
        if self.width == 0 || self.height == 0 {
            return Err(Error::Parameter("roi must have positive size".into()));
        }
        if self.right() > image_width || self.bottom() > image_height {
            return Err(Error::Shape(format!(
                "roi ({},{})+{}x{} outside {}x{} image",
                self.x0, self.y0, self.width, self.height, image_height, image_width
            )));
        }
        Ok(())
    }
}

impl std::str::FromStr for Roi {
    type Err = Error;

    /// Parses the CLI form `x0,y0,width,height`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(Error::Parameter(format!("roi must be x0,y0,w,h: {s:?}")));
        }
        let mut vals = [0usize; 4];
        for (v, p) in vals.iter_mut().zip(&parts) {
            *v = p
                .parse()
                .map_err(|_| Error::Parameter(format!("bad roi component {p:?}")))?;
        }
        let roi = Roi::new(vals[0], vals[1], vals[2], vals[3]);
        if roi.width == 0 || roi.height == 0 {
            return Err(Error::Parameter("roi must have positive size".into()));
        }
        Ok(roi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates_bounds() {
        let roi = Roi::new(2, 2, 4, 4);
        assert!(roi.validate_for(6, 6).is_ok());
        assert!(roi.validate_for(5, 6).is_err());
        assert!(Roi::new(0, 0, 0, 1).validate_for(4, 4).is_err());
    }

    #[test]
    fn parses_cli_form() {
        let roi: Roi = "1, 2,10,20".parse().unwrap();
        assert_eq!(roi, Roi::new(1, 2, 10, 20));
        assert!("1,2,3".parse::<Roi>().is_err());
        assert!("1,2,0,4".parse::<Roi>().is_err());
    }
}
