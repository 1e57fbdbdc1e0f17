//! Heatmap rendering of a frequency-slice grid with lattice node overlay.

use image::{ImageBuffer, Rgb};
use phasepair::verify::SliceGrid;

use crate::CliError;

/// Decades of dynamic range compressed into the color ramp.
const LOG_RANGE: f64 = 12.0;

fn colormap(t: f64) -> Rgb<u8> {
    // three-stop ramp, dark violet -> teal -> yellow
    let stops = [
        (0.267f64, 0.005f64, 0.329f64),
        (0.128, 0.567, 0.551),
        (0.993, 0.906, 0.144),
    ];
    let t = t.clamp(0.0, 1.0);
    let (a, b, frac) = if t < 0.5 {
        (stops[0], stops[1], t * 2.0)
    } else {
        (stops[1], stops[2], (t - 0.5) * 2.0)
    };
    let ch = |x: f64, y: f64| ((x + (y - x) * frac) * 255.0).round() as u8;
    Rgb([ch(a.0, b.0), ch(a.1, b.1), ch(a.2, b.2)])
}

/// Renders the grid with a logarithmic color scale and white dots at the
/// given frequency-plane nodes.
pub fn render_grid(
    path: &std::path::Path,
    grid: &SliceGrid<f64>,
    nodes: &[Vec<f64>],
) -> Result<(), CliError> {
    if grid.spec.dim() != 2 {
        return Err(CliError::Config(
            "image export needs a two-dimensional frequency grid".into(),
        ));
    }
    let (n0, n1) = (grid.spec.npts[0], grid.spec.npts[1]);
    let max = grid.max_value().max(f64::MIN_POSITIVE);
    let mut img = ImageBuffer::new(n0 as u32, n1 as u32);
    for i0 in 0..n0 {
        for i1 in 0..n1 {
            let v = grid.values[i0 * n1 + i1];
            let t = if v <= 0.0 {
                0.0
            } else {
                1.0 + (v / max).log10() / LOG_RANGE
            };
            // image y axis points down; flip the second frequency axis
            let px = i0 as u32;
            let py = (n1 - 1 - i1) as u32;
            img.put_pixel(px, py, colormap(t));
        }
    }
    let white = Rgb([255u8, 255, 255]);
    for node in nodes {
        let fx = (node[0] - grid.spec.origin[0]) / grid.spec.step;
        let fy = (node[1] - grid.spec.origin[1]) / grid.spec.step;
        let (cx, cy) = (fx.round() as i64, (n1 as i64 - 1) - fy.round() as i64);
        for dx in -2i64..=2 {
            for dy in -2i64..=2 {
                if dx * dx + dy * dy > 4 {
                    continue;
                }
                let (x, y) = (cx + dx, cy + dy);
                if x >= 0 && y >= 0 && (x as usize) < n0 && (y as usize) < n1 {
                    img.put_pixel(x as u32, y as u32, white);
                }
            }
        }
    }
    img.save(path)
        .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))?;
    Ok(())
}
