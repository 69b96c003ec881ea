//! Static rasters of region membership: binary PPM (`P6`) and SVG with one
//! rectangle per grid cell.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::region::{member_many, Membership, RegionExpr, Sampler};

pub const MEMBER: [u8; 3] = [31, 94, 168];
pub const NONMEMBER: [u8; 3] = [244, 241, 234];
pub const UNDECIDED: [u8; 3] = [214, 69, 65];

fn color(m: Membership) -> [u8; 3] {
    match m {
        Membership::In => MEMBER,
        Membership::Out => NONMEMBER,
        Membership::Undecided => UNDECIDED,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Style {
    Ppm,
    Svg,
}

impl std::str::FromStr for Style {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ppm" => Ok(Style::Ppm),
            "svg" => Ok(Style::Svg),
            _ => Err(Error::Usage(format!("unknown plot style `{s}` (ppm or svg)"))),
        }
    }
}

/// Membership on the sampler's grid. Row 0 is the top edge (largest
/// imaginary part).
#[derive(Clone, Debug, PartialEq)]
pub struct Raster {
    pub width: usize,
    pub height: usize,
    pub cells: Vec<Membership>,
}

impl Raster {
    pub fn at(&self, col: usize, row: usize) -> Membership {
        self.cells[row * self.width + col]
    }

    pub fn count(&self, m: Membership) -> usize {
        self.cells.iter().filter(|&&c| c == m).count()
    }
}

pub fn rasterize(region: &RegionExpr, sampler: &Sampler) -> Result<Raster> {
    let (xs, ys) = sampler.axes();
    if xs.is_empty() || ys.is_empty() {
        return Err(Error::Usage("plotting needs a positive grid step".into()));
    }
    let points: Vec<Complex64> = ys
        .iter()
        .rev()
        .flat_map(|&y| xs.iter().map(move |&x| Complex64::new(x, y)))
        .collect();
    Ok(Raster {
        width: xs.len(),
        height: ys.len(),
        cells: member_many(region, &points, sampler.exact_fallback),
    })
}

pub fn to_ppm(r: &Raster) -> Vec<u8> {
    let mut out = format!("P6\n{} {}\n255\n", r.width, r.height).into_bytes();
    out.reserve(r.cells.len() * 3);
    for &c in &r.cells {
        out.extend_from_slice(&color(c));
    }
    out
}

pub fn to_svg(r: &Raster) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\" shape-rendering=\"crispEdges\">",
        w = r.width,
        h = r.height
    );
    for row in 0..r.height {
        for col in 0..r.width {
            let [a, b, c] = color(r.at(col, row));
            let _ = writeln!(
                s,
                "<rect x=\"{col}\" y=\"{row}\" width=\"1\" height=\"1\" fill=\"#{a:02x}{b:02x}{c:02x}\"/>"
            );
        }
    }
    s.push_str("</svg>\n");
    s
}

pub fn render(r: &Raster, style: Style) -> Vec<u8> {
    match style {
        Style::Ppm => to_ppm(r),
        Style::Svg => to_svg(r).into_bytes(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::region::{parse_region, Window};
    use crate::scalar::rat;

    fn sampler(step: i64) -> Sampler {
        Sampler {
            window: Window::square(2),
            grid_step: Some(rat(1, step)),
            random_points: 0,
            ..Sampler::default()
        }
    }

    #[test]
    fn disc_center_is_member() {
        let r = rasterize(&parse_region("|T| <= 1").unwrap(), &sampler(64)).unwrap();
        assert_eq!((r.width, r.height), (257, 257));
        assert_eq!(r.at(128, 128), Membership::In);
        assert_eq!(r.at(0, 0), Membership::Out);
        let ppm = to_ppm(&r);
        assert!(ppm.starts_with(b"P6\n257 257\n255\n"));
        assert_eq!(ppm.len(), "P6\n257 257\n255\n".len() + 257 * 257 * 3);
    }

    #[test]
    fn circle_band() {
        let r = rasterize(&parse_region("|T| <= 1 & |T| >= 1").unwrap(), &sampler(4)).unwrap();
        // exactly the grid points on the unit circle: ±1, ±i
        assert_eq!(r.count(Membership::In), 4);
    }

    #[test]
    fn empty_is_uniform() {
        let r = rasterize(&RegionExpr::empty(), &sampler(8)).unwrap();
        assert_eq!(r.count(Membership::Out), r.cells.len());
        let svg = to_svg(&r);
        assert!(svg.starts_with("<svg") && svg.matches("<rect").count() == r.cells.len());
    }
}
