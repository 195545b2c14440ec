//! Border following on binary images.
//!
//! A single raster scan discovers every border: each 8-connected foreground
//! component contributes one outer border, and each 4-connected background
//! region enclosed by a component contributes one hole border parented to
//! that component's outer border. Border pixels are visited in order, so a
//! contour is a closed 8-connected point sequence. In a table skeleton the
//! hole borders delimit the cells and the outer borders delimit the tables.
//!
//! Discovery order is the raster scan itself (top-to-bottom, left-to-right),
//! which keeps the output deterministic for identical input.

/// Pixel coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Point {
    pub x: u32,
    pub y: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContourKind {
    /// Boundary of a foreground component.
    Outer,
    /// Boundary around background enclosed by a component.
    Hole,
}

/// One traced border.
#[derive(Debug, Clone)]
pub struct Contour {
    /// Border pixels in trace order; consecutive points are 8-connected and
    /// the sequence is closed for borders of more than one pixel.
    pub points: Vec<Point>,
    pub kind: ContourKind,
    /// Index of the enclosing contour, if any. A hole's parent is always the
    /// outer border of the component that encloses it.
    pub parent: Option<usize>,
}

/// Axis-aligned bounding box of a traced contour.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CellBox {
    pub x_min: u32,
    pub y_min: u32,
    pub x_max: u32,
    pub y_max: u32,
    /// Which border kind produced this box.
    pub kind: ContourKind,
}

impl CellBox {
    pub fn new(x_min: u32, y_min: u32, x_max: u32, y_max: u32, kind: ContourKind) -> Self {
        assert!(
            x_min <= x_max && y_min <= y_max,
            "box corners must be ordered"
        );
        Self {
            x_min,
            y_min,
            x_max,
            y_max,
            kind,
        }
    }

    pub fn x_mean(&self) -> f64 {
        (f64::from(self.x_min) + f64::from(self.x_max)) / 2.0
    }

    pub fn y_mean(&self) -> f64 {
        (f64::from(self.y_min) + f64::from(self.y_max)) / 2.0
    }

    pub fn width(&self) -> u32 {
        self.x_max - self.x_min + 1
    }

    pub fn height(&self) -> u32 {
        self.y_max - self.y_min + 1
    }

    pub fn area(&self) -> u64 {
        u64::from(self.width()) * u64::from(self.height())
    }

    /// Half-open membership test for a point: the low edges belong to the
    /// box, the high edges do not, so a point on a shared boundary lands in
    /// the downstream box.
    pub fn contains_center(&self, x: f64, y: f64) -> bool {
        x >= f64::from(self.x_min)
            && x < f64::from(self.x_max)
            && y >= f64::from(self.y_min)
            && y < f64::from(self.y_max)
    }
}

use crate::raster::BinaryImage;

// 8-neighborhood in clockwise screen order (y grows downward).
const NEIGHBORS: [(i64, i64); 8] = [
    (1, 0),   // 0: east
    (1, 1),   // 1: south-east
    (0, 1),   // 2: south
    (-1, 1),  // 3: south-west
    (-1, 0),  // 4: west
    (-1, -1), // 5: north-west
    (0, -1),  // 6: north
    (1, -1),  // 7: north-east
];

fn direction_index(dx: i64, dy: i64) -> usize {
    NEIGHBORS
        .iter()
        .position(|&d| d == (dx, dy))
        .expect("offset must be an 8-neighbor")
}

struct Tracer {
    width: i64,
    height: i64,
    // Per-pixel border labels: 0 background, 1 untouched foreground,
    // +n last positive mark of border n, -n border n where the scan must
    // not restart a trace.
    field: Vec<i32>,
}

impl Tracer {
    fn at(&self, x: i64, y: i64) -> i32 {
        if x < 0 || y < 0 || x >= self.width || y >= self.height {
            return 0;
        }
        self.field[(y * self.width + x) as usize]
    }

    fn set(&mut self, x: i64, y: i64, v: i32) {
        self.field[(y * self.width + x) as usize] = v;
    }

    /// Follows one border starting at `(sx, sy)` with the initial probe
    /// direction `start_dir`, marking pixels with `nbd`.
    fn trace(&mut self, sx: i64, sy: i64, start_dir: usize, nbd: i32) -> Vec<Point> {
        let mut points = Vec::new();

        // Clockwise search for the first nonzero neighbor.
        let mut first = None;
        for k in 0..8 {
            let dir = (start_dir + k) % 8;
            let (dx, dy) = NEIGHBORS[dir];
            if self.at(sx + dx, sy + dy) != 0 {
                first = Some((sx + dx, sy + dy));
                break;
            }
        }
        let Some((x1, y1)) = first else {
            // Isolated pixel: a one-point border with background all around.
            self.set(sx, sy, -nbd);
            points.push(Point {
                x: sx as u32,
                y: sy as u32,
            });
            return points;
        };

        let (mut x2, mut y2) = (x1, y1);
        let (mut x3, mut y3) = (sx, sy);
        loop {
            // Counterclockwise search around (x3, y3) starting just past
            // (x2, y2); remember whether the east neighbor was examined
            // while it read as background.
            let from = direction_index(x2 - x3, y2 - y3);
            let mut east_seen_zero = false;
            let mut found = None;
            for k in 1..=8 {
                let dir = (from + 8 - k) % 8;
                let (dx, dy) = NEIGHBORS[dir];
                if self.at(x3 + dx, y3 + dy) != 0 {
                    found = Some((x3 + dx, y3 + dy));
                    break;
                }
                if dir == 0 {
                    east_seen_zero = true;
                }
            }
            let (x4, y4) = found.expect("previous border pixel is always nonzero");

            points.push(Point {
                x: x3 as u32,
                y: y3 as u32,
            });
            if east_seen_zero {
                self.set(x3, y3, -nbd);
            } else if self.at(x3, y3) == 1 {
                self.set(x3, y3, nbd);
            }

            if (x4, y4) == (sx, sy) && (x3, y3) == (x1, y1) {
                return points;
            }
            (x2, y2) = (x3, y3);
            (x3, y3) = (x4, y4);
        }
    }
}

/// Traces every outer and hole border of the image.
pub fn find_contours(image: &BinaryImage) -> Vec<Contour> {
    let width = i64::from(image.width());
    let height = i64::from(image.height());
    let mut tracer = Tracer {
        width,
        height,
        field: image.bits().iter().map(|&b| i32::from(b)).collect(),
    };

    // Border bookkeeping indexed by label; label 1 is the image frame,
    // which behaves as the hole border everything top-level hangs off.
    let mut kinds: Vec<ContourKind> = vec![ContourKind::Hole, ContourKind::Hole];
    let mut parents: Vec<usize> = vec![0, 0];
    let mut traces: Vec<Vec<Point>> = Vec::new();

    for y in 0..height {
        let mut lnbd = 1usize;
        for x in 0..width {
            let value = tracer.at(x, y);
            if value == 0 {
                continue;
            }

            let start = if value == 1 && tracer.at(x - 1, y) == 0 {
                Some((ContourKind::Outer, 4)) // probe west first
            } else if value >= 1 && tracer.at(x + 1, y) == 0 {
                if value > 1 {
                    lnbd = value as usize;
                }
                Some((ContourKind::Hole, 0)) // probe east first
            } else {
                None
            };

            if let Some((kind, start_dir)) = start {
                let nbd = kinds.len() as i32;
                let parent = match (kind, kinds[lnbd]) {
                    (ContourKind::Outer, ContourKind::Outer) => parents[lnbd],
                    (ContourKind::Outer, ContourKind::Hole) => lnbd,
                    (ContourKind::Hole, ContourKind::Outer) => lnbd,
                    (ContourKind::Hole, ContourKind::Hole) => parents[lnbd],
                };
                kinds.push(kind);
                parents.push(parent);
                traces.push(tracer.trace(x, y, start_dir, nbd));
            }

            let after = tracer.at(x, y);
            if after != 1 {
                lnbd = after.unsigned_abs() as usize;
            }
        }
    }

    traces
        .into_iter()
        .enumerate()
        .map(|(i, points)| {
            let label = i + 2;
            Contour {
                points,
                kind: kinds[label],
                parent: if parents[label] >= 2 {
                    Some(parents[label] - 2)
                } else {
                    None
                },
            }
        })
        .collect()
}

/// Reduces each contour to its bounding box, dropping boxes smaller than
/// `min_area` (junction specks and other skeleton debris).
///
/// In a line skeleton the hole-derived boxes are the table cells; the
/// outer-derived boxes are the table outlines used by grouping.
pub fn to_cell_boxes(contours: &[Contour], min_area: u64) -> Vec<CellBox> {
    contours
        .iter()
        .filter_map(|c| {
            let x_min = c.points.iter().map(|p| p.x).min()?;
            let x_max = c.points.iter().map(|p| p.x).max()?;
            let y_min = c.points.iter().map(|p| p.y).min()?;
            let y_max = c.points.iter().map(|p| p.y).max()?;
            let cell = CellBox::new(x_min, y_min, x_max, y_max, c.kind);
            (cell.area() >= min_area).then_some(cell)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn image_from(rows: &[&str]) -> BinaryImage {
        let h = rows.len() as u32;
        let w = rows[0].len() as u32;
        let bits = rows
            .iter()
            .flat_map(|r| r.chars().map(|c| c == '#'))
            .collect();
        BinaryImage::from_bits(w, h, bits)
    }

    fn outer_count(contours: &[Contour]) -> usize {
        contours
            .iter()
            .filter(|c| c.kind == ContourKind::Outer)
            .count()
    }

    fn hole_count(contours: &[Contour]) -> usize {
        contours
            .iter()
            .filter(|c| c.kind == ContourKind::Hole)
            .count()
    }

    #[test]
    fn filled_square_has_one_outer_border() {
        let img = image_from(&["#####", "#####", "#####", "#####", "#####"]);
        let contours = find_contours(&img);
        assert_eq!(contours.len(), 1);
        assert_eq!(contours[0].kind, ContourKind::Outer);
        assert_eq!(contours[0].parent, None);
    }

    #[test]
    fn ring_has_outer_and_hole() {
        let img = image_from(&[
            "#######", "#.....#", "#.....#", "#.....#", "#.....#", "#.....#", "#######",
        ]);
        let contours = find_contours(&img);
        assert_eq!(outer_count(&contours), 1);
        assert_eq!(hole_count(&contours), 1);
        let hole = contours
            .iter()
            .position(|c| c.kind == ContourKind::Hole)
            .unwrap();
        let outer = contours
            .iter()
            .position(|c| c.kind == ContourKind::Outer)
            .unwrap();
        assert_eq!(contours[hole].parent, Some(outer));
    }

    #[test]
    fn single_pixel_is_a_one_point_border() {
        let mut img = BinaryImage::new(3, 3);
        img.set(1, 1, true);
        let contours = find_contours(&img);
        assert_eq!(contours.len(), 1);
        assert_eq!(contours[0].points, vec![Point { x: 1, y: 1 }]);
    }

    #[test]
    fn discovery_order_is_raster_order() {
        let img = image_from(&["##....##", "##....##", "........", "...##...", "...##..."]);
        let contours = find_contours(&img);
        assert_eq!(contours.len(), 3);
        assert_eq!(contours[0].points[0], Point { x: 0, y: 0 });
        assert_eq!(contours[1].points[0], Point { x: 6, y: 0 });
        assert_eq!(contours[2].points[0], Point { x: 3, y: 3 });
    }

    #[test]
    fn contours_are_closed_and_connected() {
        let img = image_from(&[".######.", ".#....#.", ".#.##.#.", ".#....#.", ".######."]);
        for contour in find_contours(&img) {
            let pts = &contour.points;
            assert!(!pts.is_empty());
            for pair in pts.windows(2) {
                let dx = i64::from(pair[0].x) - i64::from(pair[1].x);
                let dy = i64::from(pair[0].y) - i64::from(pair[1].y);
                assert!(dx.abs() <= 1 && dy.abs() <= 1 && (dx, dy) != (0, 0));
            }
            if pts.len() >= 2 {
                let (a, b) = (pts[0], pts[pts.len() - 1]);
                let dx = i64::from(a.x) - i64::from(b.x);
                let dy = i64::from(a.y) - i64::from(b.y);
                assert!(dx.abs() <= 1 && dy.abs() <= 1);
            }
        }
    }

    #[test]
    fn border_points_touch_background() {
        let img = image_from(&[
            "..........",
            ".########.",
            ".########.",
            ".###..###.",
            ".########.",
            "..........",
        ]);
        for contour in find_contours(&img) {
            for p in &contour.points {
                assert!(img.get(p.x, p.y), "border point must be foreground");
                let has_bg = NEIGHBORS
                    .iter()
                    .any(|&(dx, dy)| !img.fg_at(i64::from(p.x) + dx, i64::from(p.y) + dy));
                assert!(has_bg, "border point must touch background");
            }
        }
    }

    /// 8-connected component count by flood fill.
    fn component_count(img: &BinaryImage) -> usize {
        let mut seen = vec![false; img.bits().len()];
        let w = img.width() as usize;
        let mut count = 0;
        for start in 0..img.bits().len() {
            if !img.bits()[start] || seen[start] {
                continue;
            }
            count += 1;
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(i) = stack.pop() {
                let (x, y) = ((i % w) as i64, (i / w) as i64);
                for (dx, dy) in NEIGHBORS {
                    let (nx, ny) = (x + dx, y + dy);
                    if img.fg_at(nx, ny) {
                        let ni = ny as usize * w + nx as usize;
                        if !seen[ni] {
                            seen[ni] = true;
                            stack.push(ni);
                        }
                    }
                }
            }
        }
        count
    }

    #[test]
    fn outer_borders_match_component_count() {
        let mut state = 0x51D3_C0DEu64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..40 {
            let mut img = BinaryImage::new(40, 40);
            for _ in 0..(3 + next() % 8) {
                let x0 = (next() % 34) as u32;
                let y0 = (next() % 34) as u32;
                let bw = 2 + (next() % 6) as u32;
                let bh = 2 + (next() % 6) as u32;
                for y in y0..(y0 + bh).min(40) {
                    for x in x0..(x0 + bw).min(40) {
                        img.set(x, y, true);
                    }
                }
            }
            let contours = find_contours(&img);
            assert_eq!(outer_count(&contours), component_count(&img));
        }
    }

    #[test]
    fn boxes_contain_their_contours_and_nest() {
        let img = image_from(&[
            "############",
            "#..........#",
            "#.########.#",
            "#.#......#.#",
            "#.########.#",
            "#..........#",
            "############",
        ]);
        let contours = find_contours(&img);
        let boxes = to_cell_boxes(&contours, 0);
        assert_eq!(boxes.len(), contours.len());
        for (contour, bx) in contours.iter().zip(&boxes) {
            for p in &contour.points {
                assert!(p.x >= bx.x_min && p.x <= bx.x_max);
                assert!(p.y >= bx.y_min && p.y <= bx.y_max);
            }
            if let Some(parent) = contour.parent {
                let pb = &boxes[parent];
                assert!(bx.x_min >= pb.x_min && bx.x_max <= pb.x_max);
                assert!(bx.y_min >= pb.y_min && bx.y_max <= pb.y_max);
            }
            if contour.kind == ContourKind::Hole {
                assert_eq!(contours[contour.parent.unwrap()].kind, ContourKind::Outer);
            }
        }
    }

    #[test]
    fn cell_box_geometry() {
        let img = image_from(&[
            "##########",
            "##########",
            "##########",
            "##########",
            "##########",
            "##########",
            "##########",
            "##########",
            "##########",
            "##########",
            "##########",
            "##########",
            "##########",
            "##########",
            "##########",
            "##########",
            "##########",
            "##########",
            "##########",
            "##########",
        ]);
        let boxes = to_cell_boxes(&find_contours(&img), 0);
        assert_eq!(boxes.len(), 1);
        let b = boxes[0];
        assert_eq!((b.x_min, b.y_min, b.x_max, b.y_max), (0, 0, 9, 19));
        assert_eq!(b.x_mean(), 4.5);
        assert_eq!(b.y_mean(), 9.5);
        assert_eq!(b.area(), 200);
    }

    #[test]
    fn min_area_filters_specks() {
        let mut img = BinaryImage::new(30, 30);
        img.set(5, 5, true);
        let boxes = to_cell_boxes(&find_contours(&img), 100);
        assert!(boxes.is_empty());
    }
}
