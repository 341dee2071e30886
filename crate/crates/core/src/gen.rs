//! Random well-formed programs over a ground-truth world.
//!
//! Every body gets a pose and a rigid velocity field in one global chart, so
//! each relation has a known true value. Literals in generated programs carry
//! coordinates read off that chart, and every operation is applied only where
//! its constraints hold. A generated program therefore checks clean, and the
//! value of every binding is known independently of the operations.
//!
//! Each program also lists its *swap sites*: primitive occurrences that some
//! operation (or representation rule) ties to another occurrence. Replacing
//! one of them with any other primitive of the same kind must make the
//! program fail to check.

use rand::seq::IndexedRandom;
use rand::Rng;

use crate::syntax::format_number;

pub type V3 = [f64; 3];
/// Row-major 3×3 matrix.
pub type M3 = [[f64; 3]; 3];

fn sub(a: V3, b: V3) -> V3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn add(a: V3, b: V3) -> V3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn cross(a: V3, b: V3) -> V3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn transpose(m: &M3) -> M3 {
    let mut t = [[0.0; 3]; 3];
    for (i, row) in m.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            t[j][i] = *v;
        }
    }
    t
}

fn mat_vec(m: &M3, v: V3) -> V3 {
    m.map(|row| row[0] * v[0] + row[1] * v[1] + row[2] * v[2])
}

fn mat_mul(a: &M3, b: &M3) -> M3 {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

fn random_v3<R: Rng + ?Sized>(rng: &mut R, scale: f64) -> V3 {
    [0; 3].map(|_| rng.random_range(-scale..scale))
}

/// Uniformly distributed axis, uniformly distributed angle.
pub fn random_rotation<R: Rng + ?Sized>(rng: &mut R) -> M3 {
    let axis = loop {
        let v = random_v3(rng, 1.0);
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if (0.1..=1.0).contains(&n) {
            break v.map(|c| c / n);
        }
    };
    let angle = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
    let (s, c) = angle.sin_cos();
    let [x, y, z] = axis;
    let t = 1.0 - c;
    [
        [t * x * x + c, t * x * y - s * z, t * x * z + s * y],
        [t * x * y + s * z, t * y * y + c, t * y * z - s * x],
        [t * x * z - s * y, t * y * z + s * x, t * z * z + c],
    ]
}

/// A body and its velocity field `v(x) = velocity + omega × x` in the global
/// chart.
#[derive(Debug, Clone)]
pub struct BodyTruth {
    pub name: String,
    pub omega: V3,
    pub velocity: V3,
}

#[derive(Debug, Clone)]
pub struct PointTruth {
    pub name: String,
    pub body: usize,
    pub position: V3,
}

#[derive(Debug, Clone)]
pub struct OrientTruth {
    pub name: String,
    pub body: usize,
    /// Columns are the frame's axes in global coordinates.
    pub axes: M3,
}

#[derive(Debug, Clone)]
pub struct FrameTruth {
    pub name: String,
    pub body: usize,
    pub point: usize,
    pub orient: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WorldConfig {
    pub bodies: usize,
    pub points_per_body: usize,
    /// Each orientation frame is bundled with a point into a frame.
    pub orients_per_body: usize,
    /// Extra point pairs on different bodies at one location.
    pub coincident_pairs: usize,
}

impl Default for WorldConfig {
    fn default() -> Self {
        Self { bodies: 4, points_per_body: 3, orients_per_body: 2, coincident_pairs: 2 }
    }
}

/// Ground truth: all primitives placed in one global chart.
#[derive(Debug, Clone)]
pub struct WorldChart {
    pub bodies: Vec<BodyTruth>,
    pub points: Vec<PointTruth>,
    pub orients: Vec<OrientTruth>,
    pub frames: Vec<FrameTruth>,
    /// Point indices.
    pub coincident: Vec<(usize, usize)>,
}

impl WorldChart {
    pub fn random<R: Rng + ?Sized>(rng: &mut R, cfg: &WorldConfig) -> Self {
        assert!(cfg.bodies >= 2 && cfg.points_per_body >= 2 && cfg.orients_per_body >= 2);
        assert!(cfg.points_per_body >= cfg.orients_per_body);
        let mut w = WorldChart {
            bodies: Vec::new(),
            points: Vec::new(),
            orients: Vec::new(),
            frames: Vec::new(),
            coincident: Vec::new(),
        };
        for b in 0..cfg.bodies {
            w.bodies.push(BodyTruth {
                name: format!("B{b}"),
                omega: random_v3(rng, 2.0),
                velocity: random_v3(rng, 2.0),
            });
            for i in 0..cfg.points_per_body {
                w.points.push(PointTruth { name: format!("p{b}_{i}"), body: b, position: random_v3(rng, 5.0) });
            }
            for i in 0..cfg.orients_per_body {
                w.orients.push(OrientTruth { name: format!("o{b}_{i}"), body: b, axes: random_rotation(rng) });
            }
        }
        for b in 0..cfg.bodies {
            for i in 0..cfg.orients_per_body {
                w.frames.push(FrameTruth {
                    name: format!("f{b}_{i}"),
                    body: b,
                    point: b * cfg.points_per_body + i,
                    orient: b * cfg.orients_per_body + i,
                });
            }
        }
        for k in 0..cfg.coincident_pairs {
            let b1 = rng.random_range(0..cfg.bodies);
            let b2 = (b1 + rng.random_range(1..cfg.bodies)) % cfg.bodies;
            let x = random_v3(rng, 5.0);
            let a = w.points.len();
            w.points.push(PointTruth { name: format!("k{k}_{b1}"), body: b1, position: x });
            w.points.push(PointTruth { name: format!("k{k}_{b2}"), body: b2, position: x });
            w.coincident.push((a, a + 1));
        }
        w
    }

    /// Declarations of every body and primitive.
    pub fn declarations(&self) -> String {
        let mut out = String::new();
        let names: Vec<_> = self.bodies.iter().map(|b| b.name.as_str()).collect();
        out.push_str(&format!("body {}\n", names.join(", ")));
        for p in &self.points {
            out.push_str(&format!("point {} on {}\n", p.name, self.bodies[p.body].name));
        }
        for o in &self.orients {
            out.push_str(&format!("orientationFrame {} on {}\n", o.name, self.bodies[o.body].name));
        }
        for f in &self.frames {
            out.push_str(&format!(
                "frame {} on {} = ({}, {})\n",
                f.name, self.bodies[f.body].name, self.points[f.point].name, self.orients[f.orient].name
            ));
        }
        for (a, b) in &self.coincident {
            out.push_str(&format!("coincident {}, {}\n", self.points[*a].name, self.points[*b].name));
        }
        out
    }

    fn points_on(&self, body: usize) -> Vec<usize> {
        (0..self.points.len()).filter(|&p| self.points[p].body == body).collect()
    }

    fn orients_on(&self, body: usize) -> Vec<usize> {
        (0..self.orients.len()).filter(|&o| self.orients[o].body == body).collect()
    }

    fn velocity_at(&self, body: usize, x: V3) -> V3 {
        let b = &self.bodies[body];
        add(b.velocity, cross(b.omega, x))
    }

    /// Global → frame `orient` coordinates.
    fn express(&self, orient: usize, v: V3) -> V3 {
        mat_vec(&transpose(&self.orients[orient].axes), v)
    }

    fn rotation(&self, from: usize, to: usize) -> M3 {
        mat_mul(&transpose(&self.orients[to].axes), &self.orients[from].axes)
    }

    /// The true value of a relation, read off the global chart.
    pub fn truth(&self, q: &Query) -> Truth {
        match *q {
            Query::Position { point, ref_point, frame } => {
                Truth::Vector(self.express(frame, sub(self.points[point].position, self.points[ref_point].position)))
            }
            Query::Orientation { orient, ref_orient } => Truth::Rotation(self.rotation(orient, ref_orient)),
            Query::Pose { point, orient, ref_point, ref_orient } => Truth::Pose(
                self.rotation(orient, ref_orient),
                self.express(ref_orient, sub(self.points[point].position, self.points[ref_point].position)),
            ),
            Query::PoseFrame { frame, ref_frame } => {
                let (f, g) = (&self.frames[frame], &self.frames[ref_frame]);
                self.truth(&Query::Pose { point: f.point, orient: f.orient, ref_point: g.point, ref_orient: g.orient })
            }
            Query::AngularVelocity { body, ref_body, frame } => {
                Truth::Vector(self.express(frame, sub(self.bodies[body].omega, self.bodies[ref_body].omega)))
            }
            Query::LinearVelocity { point, ref_body, frame } => {
                let p = &self.points[point];
                let v = sub(self.velocity_at(p.body, p.position), self.velocity_at(ref_body, p.position));
                Truth::Vector(self.express(frame, v))
            }
            Query::Twist { point, ref_body, frame } => {
                let body = self.points[point].body;
                let (Truth::Vector(w), Truth::Vector(v)) = (
                    self.truth(&Query::AngularVelocity { body, ref_body, frame }),
                    self.truth(&Query::LinearVelocity { point, ref_body, frame }),
                ) else {
                    unreachable!()
                };
                Truth::Twist(w, v)
            }
        }
    }
}

/// A relation of the world, by primitive and body indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Query {
    /// Coordinates in orientation frame `frame`.
    Position {
        point: usize,
        ref_point: usize,
        frame: usize,
    },
    /// Expressed in `ref_orient`.
    Orientation {
        orient: usize,
        ref_orient: usize,
    },
    Pose {
        point: usize,
        orient: usize,
        ref_point: usize,
        ref_orient: usize,
    },
    PoseFrame {
        frame: usize,
        ref_frame: usize,
    },
    AngularVelocity {
        body: usize,
        ref_body: usize,
        frame: usize,
    },
    /// Velocity of the body-fixed `point` with respect to `ref_body`.
    LinearVelocity {
        point: usize,
        ref_body: usize,
        frame: usize,
    },
    Twist {
        point: usize,
        ref_body: usize,
        frame: usize,
    },
}

impl Query {
    /// The same relation in another coordinate frame, for kinds that have a
    /// free one.
    fn in_frame(self, to: usize) -> Query {
        match self {
            Query::Position { point, ref_point, .. } => Query::Position { point, ref_point, frame: to },
            Query::AngularVelocity { body, ref_body, .. } => Query::AngularVelocity { body, ref_body, frame: to },
            Query::LinearVelocity { point, ref_body, .. } => Query::LinearVelocity { point, ref_body, frame: to },
            Query::Twist { point, ref_body, .. } => Query::Twist { point, ref_body, frame: to },
            locked => locked,
        }
    }
}

/// True coordinates; matrices are row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Truth {
    Vector(V3),
    Rotation(M3),
    Pose(M3, V3),
    Twist(V3, V3),
}

/// A primitive occurrence that an operation ties to another one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwapSite {
    /// Byte range of the name in the program text.
    pub start: usize,
    pub end: usize,
    pub original: String,
    /// Every other primitive of the same kind.
    pub replacements: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct Binding {
    pub name: String,
    pub query: Query,
    /// Number of operations between the literals and this binding.
    pub depth: usize,
}

#[derive(Debug, Clone)]
pub struct GeneratedProgram {
    pub world: WorldChart,
    pub text: String,
    pub bindings: Vec<Binding>,
    pub sites: Vec<SwapSite>,
}

impl GeneratedProgram {
    /// The program text with one site renamed.
    pub fn swapped(&self, site: &SwapSite, replacement: &str) -> String {
        format!("{}{}{}", &self.text[..site.start], replacement, &self.text[site.end..])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Template {
    PositionChain,
    ChangePoint,
    ChangeReferencePoint,
    PositionInverse,
    OrientationChain,
    ChangeOrientationFrame,
    ChangeReferenceOrientationFrame,
    OrientationInverse,
    PoseChain,
    PoseFrameChain,
    PoseInverse,
    DecomposePose,
    BundlePose,
    AngularVelocityChain,
    AngularVelocityInverse,
    LinearVelocityCompose,
    TwistCompose,
    ChangeVelocityReferencePoint,
    AssembleTwist,
    SplitTwist,
    ChangeCoordinateFrame,
}

impl Template {
    pub const ALL: [Template; 21] = [
        Template::PositionChain,
        Template::ChangePoint,
        Template::ChangeReferencePoint,
        Template::PositionInverse,
        Template::OrientationChain,
        Template::ChangeOrientationFrame,
        Template::ChangeReferenceOrientationFrame,
        Template::OrientationInverse,
        Template::PoseChain,
        Template::PoseFrameChain,
        Template::PoseInverse,
        Template::DecomposePose,
        Template::BundlePose,
        Template::AngularVelocityChain,
        Template::AngularVelocityInverse,
        Template::LinearVelocityCompose,
        Template::TwistCompose,
        Template::ChangeVelocityReferencePoint,
        Template::AssembleTwist,
        Template::SplitTwist,
        Template::ChangeCoordinateFrame,
    ];
}

#[derive(Debug, Clone)]
pub struct GenConfig {
    pub world: WorldConfig,
    pub statements: usize,
    /// Number of literals in compose chains.
    pub chain: std::ops::RangeInclusive<usize>,
    pub coords: bool,
    /// Probability that an operand is written inline instead of bound first.
    pub inline: f64,
    pub templates: Vec<Template>,
}

impl Default for GenConfig {
    fn default() -> Self {
        Self {
            world: WorldConfig::default(),
            statements: 8,
            chain: 2..=4,
            coords: true,
            inline: 0.3,
            templates: Template::ALL.to_vec(),
        }
    }
}

pub fn generate<R: Rng + ?Sized>(rng: &mut R, cfg: &GenConfig) -> GeneratedProgram {
    let world = WorldChart::random(rng, &cfg.world);
    generate_in(rng, cfg, world)
}

/// Generates statements over an existing world.
pub fn generate_in<R: Rng + ?Sized>(rng: &mut R, cfg: &GenConfig, world: WorldChart) -> GeneratedProgram {
    let text = world.declarations();
    let mut e = Emitter { world: &world, rng, cfg, text, sites: Vec::new(), bindings: Vec::new(), next: 0 };
    for _ in 0..cfg.statements {
        let t = *cfg.templates.choose(e.rng).expect("at least one template");
        e.template(t);
    }
    let Emitter { text, sites, bindings, .. } = e;
    GeneratedProgram { world, text, bindings, sites }
}

/// Which primitive occurrences of a literal are constrained.
#[derive(Debug, Clone, Copy, Default)]
struct Links {
    near: bool,
    near_orient: bool,
    far: bool,
    far_orient: bool,
    at: bool,
}

const NONE: Links = Links { near: false, near_orient: false, far: false, far_orient: false, at: false };
const AT: Links = Links { at: true, ..NONE };

#[derive(Debug, Clone, Copy)]
enum Class {
    Point,
    Orient,
    Frame,
}

enum Operand {
    Named(String),
    Inline(Query, Links),
}

enum Target {
    Single(Query),
    Pair(Query, Query),
}

struct Emitter<'a, R: ?Sized> {
    world: &'a WorldChart,
    rng: &'a mut R,
    cfg: &'a GenConfig,
    text: String,
    sites: Vec<SwapSite>,
    bindings: Vec<Binding>,
    next: usize,
}

impl<R: Rng + ?Sized> Emitter<'_, R> {
    fn fresh(&mut self, prefix: &str) -> String {
        self.next += 1;
        format!("{prefix}{}", self.next)
    }

    fn prim(&mut self, class: Class, index: usize, linked: bool) {
        let w = self.world;
        let (name, all): (&str, Vec<&str>) = match class {
            Class::Point => (&w.points[index].name, w.points.iter().map(|p| p.name.as_str()).collect()),
            Class::Orient => (&w.orients[index].name, w.orients.iter().map(|p| p.name.as_str()).collect()),
            Class::Frame => (&w.frames[index].name, w.frames.iter().map(|p| p.name.as_str()).collect()),
        };
        let start = self.text.len();
        self.text.push_str(name);
        if linked {
            self.sites.push(SwapSite {
                start,
                end: self.text.len(),
                original: name.to_owned(),
                replacements: all.into_iter().filter(|n| *n != name).map(str::to_owned).collect(),
            });
        }
    }

    fn body(&mut self, b: usize) {
        self.text.push_str(&self.world.bodies[b].name);
    }

    fn numbers(&mut self, values: &[f64]) {
        let parts: Vec<_> = values.iter().map(|v| format_number(*v)).collect();
        self.text.push('[');
        self.text.push_str(&parts.join(", "));
        self.text.push(']');
    }

    fn fixed(&mut self, class: Class, index: usize, body: usize, linked: bool) {
        self.prim(class, index, linked);
        self.text.push('|');
        self.body(body);
    }

    fn literal(&mut self, q: Query, l: Links) {
        let w = self.world;
        let at = match q {
            Query::Position { point, ref_point, frame } => {
                self.text.push_str("Position(");
                self.fixed(Class::Point, point, w.points[point].body, l.near);
                self.text.push_str(", ");
                self.fixed(Class::Point, ref_point, w.points[ref_point].body, l.far);
                frame
            }
            Query::Orientation { orient, ref_orient } => {
                self.text.push_str("Orientation(");
                self.fixed(Class::Orient, orient, w.orients[orient].body, l.near);
                self.text.push_str(", ");
                self.fixed(Class::Orient, ref_orient, w.orients[ref_orient].body, l.far);
                ref_orient
            }
            Query::Pose { point, orient, ref_point, ref_orient } => {
                self.text.push_str("Pose((");
                self.prim(Class::Point, point, l.near);
                self.text.push_str(", ");
                self.prim(Class::Orient, orient, l.near_orient);
                self.text.push_str(")|");
                self.body(w.points[point].body);
                self.text.push_str(", (");
                self.prim(Class::Point, ref_point, l.far);
                self.text.push_str(", ");
                self.prim(Class::Orient, ref_orient, l.far_orient);
                self.text.push_str(")|");
                self.body(w.points[ref_point].body);
                ref_orient
            }
            Query::PoseFrame { frame, ref_frame } => {
                self.text.push_str("Pose(");
                self.fixed(Class::Frame, frame, w.frames[frame].body, l.near);
                self.text.push_str(", ");
                self.fixed(Class::Frame, ref_frame, w.frames[ref_frame].body, l.far);
                w.frames[ref_frame].orient
            }
            Query::AngularVelocity { body, ref_body, frame } => {
                self.text.push_str("AngularVelocity(");
                self.body(body);
                self.text.push_str(", ");
                self.body(ref_body);
                frame
            }
            Query::LinearVelocity { point, ref_body, frame } | Query::Twist { point, ref_body, frame } => {
                let kw = if matches!(q, Query::Twist { .. }) { "Twist(" } else { "LinearVelocity(" };
                self.text.push_str(kw);
                self.fixed(Class::Point, point, w.points[point].body, l.near);
                self.text.push_str(", ");
                self.body(ref_body);
                frame
            }
        };
        self.text.push_str(") @ ");
        self.prim(Class::Orient, at, l.at);
        if self.cfg.coords {
            self.text.push_str(" = ");
            match w.truth(&q) {
                Truth::Vector(v) => self.numbers(&v),
                Truth::Twist(a, b) => self.numbers(&[a[0], a[1], a[2], b[0], b[1], b[2]]),
                Truth::Rotation(m) => {
                    self.text.push('[');
                    for (i, row) in m.iter().enumerate() {
                        if i > 0 {
                            self.text.push_str(", ");
                        }
                        self.numbers(row);
                    }
                    self.text.push(']');
                }
                Truth::Pose(m, t) => {
                    self.text.push('[');
                    for (i, row) in m.iter().enumerate() {
                        if i > 0 {
                            self.text.push_str(", ");
                        }
                        self.numbers(&[row[0], row[1], row[2], t[i]]);
                    }
                    self.text.push(']');
                }
            }
        }
    }

    /// Either binds the literal now or defers it to be written inline.
    fn operand(&mut self, q: Query, l: Links) -> Operand {
        if self.rng.random_bool(self.cfg.inline) {
            return Operand::Inline(q, l);
        }
        self.bound(q, l)
    }

    fn bound(&mut self, q: Query, l: Links) -> Operand {
        let name = self.fresh("l");
        self.text.push_str(&format!("let {name} = "));
        self.literal(q, l);
        self.text.push('\n');
        self.bindings.push(Binding { name: name.clone(), query: q, depth: 0 });
        Operand::Named(name)
    }

    fn write(&mut self, o: Operand) {
        match o {
            Operand::Named(n) => self.text.push_str(&n),
            Operand::Inline(q, l) => self.literal(q, l),
        }
    }

    fn call(&mut self, target: Target, subject: Operand, calls: Vec<(&str, Option<Operand>)>) {
        let depth = calls.len();
        match target {
            Target::Single(q) => {
                let name = self.fresh("v");
                self.text.push_str(&format!("let {name} = "));
                self.bindings.push(Binding { name, query: q, depth });
            }
            Target::Pair(a, b) => {
                let (x, y) = (self.fresh("v"), self.fresh("v"));
                self.text.push_str(&format!("let ({x}, {y}) = "));
                self.bindings.push(Binding { name: x, query: a, depth });
                self.bindings.push(Binding { name: y, query: b, depth });
            }
        }
        self.write(subject);
        for (method, arg) in calls {
            self.text.push('.');
            self.text.push_str(method);
            self.text.push('(');
            if let Some(arg) = arg {
                self.write(arg);
            }
            self.text.push(')');
        }
        self.text.push('\n');
    }

    fn unary(&mut self, result: Target, q: Query, l: Links, method: &str) {
        let s = self.operand(q, l);
        self.call(result, s, vec![(method, None)]);
    }

    fn binary(&mut self, result: Query, s: (Query, Links), a: (Query, Links), method: &str) {
        let s = self.operand(s.0, s.1);
        let a = self.operand(a.0, a.1);
        self.call(Target::Single(result), s, vec![(method, Some(a))]);
    }

    /// Compose chain of bound literals, `l0.compose(l1).compose(l2)…`.
    fn chain(&mut self, literals: Vec<(Query, Links)>, result: Query) {
        let mut ops: Vec<_> = literals.into_iter().map(|(q, l)| self.bound(q, l)).collect();
        let first = ops.remove(0);
        let calls = ops.into_iter().map(|o| ("compose", Some(o))).collect();
        self.call(Target::Single(result), first, calls);
    }

    fn chain_len(&mut self) -> usize {
        self.rng.random_range(self.cfg.chain.clone())
    }

    fn any_body(&mut self) -> usize {
        self.rng.random_range(0..self.world.bodies.len())
    }

    fn other_body(&mut self, not: usize) -> usize {
        let n = self.world.bodies.len();
        (not + self.rng.random_range(1..n)) % n
    }

    fn pick(&mut self, from: &[usize]) -> usize {
        *from.choose(self.rng).expect("non-empty")
    }

    fn pick_other(&mut self, from: &[usize], not: usize) -> usize {
        let rest: Vec<_> = from.iter().copied().filter(|&x| x != not).collect();
        self.pick(&rest)
    }

    fn any_point(&mut self) -> usize {
        self.rng.random_range(0..self.world.points.len())
    }

    fn any_orient(&mut self) -> usize {
        self.rng.random_range(0..self.world.orients.len())
    }

    fn any_frame(&mut self) -> usize {
        self.rng.random_range(0..self.world.frames.len())
    }

    fn point_on(&mut self, body: usize) -> usize {
        let on = self.world.points_on(body);
        self.pick(&on)
    }

    fn orient_on(&mut self, body: usize) -> usize {
        let on = self.world.orients_on(body);
        self.pick(&on)
    }

    fn template(&mut self, t: Template) {
        let w = self.world;
        let link = |near, far| Links { near, far, at: true, ..NONE };
        match t {
            Template::PositionChain => {
                let n = self.chain_len();
                let r = self.any_orient();
                let mut pts = vec![self.any_point()];
                for _ in 0..n {
                    let last = *pts.last().unwrap();
                    let all: Vec<usize> = (0..w.points.len()).collect();
                    pts.push(self.pick_other(&all, last));
                }
                let lits = (0..n)
                    .map(|i| {
                        (Query::Position { point: pts[i], ref_point: pts[i + 1], frame: r }, link(i > 0, i + 1 < n))
                    })
                    .collect();
                self.chain(lits, Query::Position { point: pts[0], ref_point: pts[n], frame: r });
            }
            Template::ChangePoint => {
                let b = self.any_body();
                let a = self.point_on(b);
                let a2 = self.pick_other(&w.points_on(b), a);
                let f = self.any_point();
                let r = self.any_orient();
                self.binary(
                    Query::Position { point: a2, ref_point: f, frame: r },
                    (Query::Position { point: a, ref_point: f, frame: r }, link(true, false)),
                    (Query::Position { point: a2, ref_point: a, frame: r }, link(false, true)),
                    "changePoint",
                );
            }
            Template::ChangeReferencePoint => {
                let b = self.any_body();
                let f1 = self.point_on(b);
                let f2 = self.pick_other(&w.points_on(b), f1);
                let e = self.any_point();
                let r = self.any_orient();
                self.binary(
                    Query::Position { point: e, ref_point: f2, frame: r },
                    (Query::Position { point: e, ref_point: f1, frame: r }, link(false, true)),
                    (Query::Position { point: f1, ref_point: f2, frame: r }, link(true, false)),
                    "changeReferencePoint",
                );
            }
            Template::PositionInverse => {
                let (e, f, r) = (self.any_point(), self.any_point(), self.any_orient());
                self.unary(
                    Target::Single(Query::Position { point: f, ref_point: e, frame: r }),
                    Query::Position { point: e, ref_point: f, frame: r },
                    NONE,
                    "inverse",
                );
            }
            Template::OrientationChain => {
                let n = self.chain_len();
                let mut os = vec![self.any_orient()];
                for _ in 0..n {
                    let last = *os.last().unwrap();
                    let all: Vec<usize> = (0..w.orients.len()).collect();
                    os.push(self.pick_other(&all, last));
                }
                let lits = (0..n)
                    .map(|i| (Query::Orientation { orient: os[i], ref_orient: os[i + 1] }, link(i > 0, true)))
                    .collect();
                self.chain(lits, Query::Orientation { orient: os[0], ref_orient: os[n] });
            }
            Template::ChangeOrientationFrame => {
                let b = self.any_body();
                let a1 = self.orient_on(b);
                let a2 = self.pick_other(&w.orients_on(b), a1);
                let all: Vec<usize> = (0..w.orients.len()).collect();
                let r = self.pick_other(&all, a1);
                self.binary(
                    Query::Orientation { orient: a2, ref_orient: r },
                    (Query::Orientation { orient: a1, ref_orient: r }, link(true, true)),
                    (Query::Orientation { orient: a2, ref_orient: a1 }, link(false, true)),
                    "changeOrientationFrame",
                );
            }
            Template::ChangeReferenceOrientationFrame => {
                let b = self.any_body();
                let b1 = self.orient_on(b);
                let b2 = self.pick_other(&w.orients_on(b), b1);
                let all: Vec<usize> = (0..w.orients.len()).collect();
                let a = self.pick_other(&all, b1);
                self.binary(
                    Query::Orientation { orient: a, ref_orient: b2 },
                    (Query::Orientation { orient: a, ref_orient: b1 }, link(false, true)),
                    (Query::Orientation { orient: b1, ref_orient: b2 }, link(true, true)),
                    "changeReferenceOrientationFrame",
                );
            }
            Template::OrientationInverse => {
                let a = self.any_orient();
                let all: Vec<usize> = (0..w.orients.len()).collect();
                let b = self.pick_other(&all, a);
                self.unary(
                    Target::Single(Query::Orientation { orient: b, ref_orient: a }),
                    Query::Orientation { orient: a, ref_orient: b },
                    link(false, true),
                    "inverse",
                );
            }
            Template::PoseChain => {
                let n = self.chain_len();
                let mut ends: Vec<(usize, usize)> = Vec::new();
                while ends.len() <= n {
                    let b = self.any_body();
                    let end = (self.point_on(b), self.orient_on(b));
                    if ends.last() != Some(&end) {
                        ends.push(end);
                    }
                }
                let lits = (0..n)
                    .map(|i| {
                        let ((p, o), (q, r)) = (ends[i], ends[i + 1]);
                        let l = Links { near: i > 0, near_orient: i > 0, far: i + 1 < n, far_orient: true, at: true };
                        (Query::Pose { point: p, orient: o, ref_point: q, ref_orient: r }, l)
                    })
                    .collect();
                let ((p, o), (q, r)) = (ends[0], ends[n]);
                self.chain(lits, Query::Pose { point: p, orient: o, ref_point: q, ref_orient: r });
            }
            Template::PoseFrameChain => {
                let n = self.chain_len();
                let mut fs = vec![self.any_frame()];
                for _ in 0..n {
                    let last = *fs.last().unwrap();
                    let all: Vec<usize> = (0..w.frames.len()).collect();
                    fs.push(self.pick_other(&all, last));
                }
                let lits = (0..n)
                    .map(|i| (Query::PoseFrame { frame: fs[i], ref_frame: fs[i + 1] }, link(i > 0, true)))
                    .collect();
                self.chain(lits, Query::PoseFrame { frame: fs[0], ref_frame: fs[n] });
            }
            Template::PoseInverse => {
                if self.rng.random_bool(0.5) {
                    let (b1, b2) = (self.any_body(), self.any_body());
                    let (p, o, q, r) = (self.point_on(b1), self.orient_on(b1), self.point_on(b2), self.orient_on(b2));
                    let l = Links { far_orient: true, at: true, ..NONE };
                    self.unary(
                        Target::Single(Query::Pose { point: q, orient: r, ref_point: p, ref_orient: o }),
                        Query::Pose { point: p, orient: o, ref_point: q, ref_orient: r },
                        l,
                        "inverse",
                    );
                } else {
                    let (f, g) = (self.any_frame(), self.any_frame());
                    self.unary(
                        Target::Single(Query::PoseFrame { frame: g, ref_frame: f }),
                        Query::PoseFrame { frame: f, ref_frame: g },
                        link(false, true),
                        "inverse",
                    );
                }
            }
            Template::DecomposePose => {
                let (q, pos, rot) = if self.rng.random_bool(0.5) {
                    let (b1, b2) = (self.any_body(), self.any_body());
                    let (p, o, q, r) = (self.point_on(b1), self.orient_on(b1), self.point_on(b2), self.orient_on(b2));
                    (
                        Query::Pose { point: p, orient: o, ref_point: q, ref_orient: r },
                        Query::Position { point: p, ref_point: q, frame: r },
                        Query::Orientation { orient: o, ref_orient: r },
                    )
                } else {
                    let (f, g) = (self.any_frame(), self.any_frame());
                    let (ft, gt) = (&w.frames[f], &w.frames[g]);
                    (
                        Query::PoseFrame { frame: f, ref_frame: g },
                        Query::Position { point: ft.point, ref_point: gt.point, frame: gt.orient },
                        Query::Orientation { orient: ft.orient, ref_orient: gt.orient },
                    )
                };
                self.unary(Target::Pair(pos, rot), q, NONE, "decomposePose");
            }
            Template::BundlePose => {
                let (c, d) = (self.any_body(), self.any_body());
                let (e, a, f, b) = (self.point_on(c), self.orient_on(c), self.point_on(d), self.orient_on(d));
                self.binary(
                    Query::Pose { point: e, orient: a, ref_point: f, ref_orient: b },
                    (Query::Position { point: e, ref_point: f, frame: b }, AT),
                    (Query::Orientation { orient: a, ref_orient: b }, link(false, true)),
                    "bundlePose",
                );
            }
            Template::AngularVelocityChain => {
                let n = self.chain_len();
                let r = self.any_orient();
                let mut bs = vec![self.any_body()];
                for _ in 0..n {
                    let last = *bs.last().unwrap();
                    bs.push(self.other_body(last));
                }
                let lits = (0..n)
                    .map(|i| (Query::AngularVelocity { body: bs[i], ref_body: bs[i + 1], frame: r }, AT))
                    .collect();
                self.chain(lits, Query::AngularVelocity { body: bs[0], ref_body: bs[n], frame: r });
            }
            Template::AngularVelocityInverse => {
                let c = self.any_body();
                let d = self.other_body(c);
                let r = self.any_orient();
                self.unary(
                    Target::Single(Query::AngularVelocity { body: d, ref_body: c, frame: r }),
                    Query::AngularVelocity { body: c, ref_body: d, frame: r },
                    NONE,
                    "inverse",
                );
            }
            Template::LinearVelocityCompose | Template::TwistCompose => {
                let Some(&(x, y)) = w.coincident.choose(self.rng) else {
                    return self.template(Template::PositionChain);
                };
                let (u, u2) = if self.rng.random_bool(0.5) { (x, y) } else { (y, x) };
                let d = w.points[u2].body;
                let e = self.other_body(d);
                let r = self.any_orient();
                let l = Links { near: true, at: true, ..NONE };
                let make = |point, ref_body| {
                    if t == Template::TwistCompose {
                        Query::Twist { point, ref_body, frame: r }
                    } else {
                        Query::LinearVelocity { point, ref_body, frame: r }
                    }
                };
                self.binary(make(u, e), (make(u, d), l), (make(u2, e), l), "compose");
            }
            Template::ChangeVelocityReferencePoint => {
                let c = self.any_body();
                let d = self.other_body(c);
                let e1 = self.point_on(c);
                let e2 = self.pick_other(&w.points_on(c), e1);
                let r = self.any_orient();
                self.binary(
                    Query::Twist { point: e2, ref_body: d, frame: r },
                    (Query::Twist { point: e1, ref_body: d, frame: r }, link(true, false)),
                    (Query::Position { point: e2, ref_point: e1, frame: r }, link(false, true)),
                    "changeVelocityReferencePoint",
                );
            }
            Template::AssembleTwist => {
                let c = self.any_body();
                let d = self.other_body(c);
                let e = self.point_on(c);
                let r = self.any_orient();
                self.binary(
                    Query::Twist { point: e, ref_body: d, frame: r },
                    (Query::AngularVelocity { body: c, ref_body: d, frame: r }, AT),
                    (Query::LinearVelocity { point: e, ref_body: d, frame: r }, AT),
                    "assembleTwist",
                );
            }
            Template::SplitTwist => {
                let c = self.any_body();
                let d = self.other_body(c);
                let e = self.point_on(c);
                let r = self.any_orient();
                self.unary(
                    Target::Pair(
                        Query::AngularVelocity { body: c, ref_body: d, frame: r },
                        Query::LinearVelocity { point: e, ref_body: d, frame: r },
                    ),
                    Query::Twist { point: e, ref_body: d, frame: r },
                    NONE,
                    "splitTwist",
                );
            }
            Template::ChangeCoordinateFrame => {
                let c = self.any_body();
                let d = self.other_body(c);
                let r1 = self.any_orient();
                let all: Vec<usize> = (0..w.orients.len()).collect();
                let r2 = self.pick_other(&all, r1);
                let subject = match self.rng.random_range(0..4) {
                    0 => Query::Position { point: self.any_point(), ref_point: self.any_point(), frame: r1 },
                    1 => Query::AngularVelocity { body: c, ref_body: d, frame: r1 },
                    2 => Query::LinearVelocity { point: self.point_on(c), ref_body: d, frame: r1 },
                    _ => Query::Twist { point: self.point_on(c), ref_body: d, frame: r1 },
                };
                self.binary(
                    subject.in_frame(r2),
                    (subject, AT),
                    (Query::Orientation { orient: r1, ref_orient: r2 }, link(true, true)),
                    "changeCoordinateFrame",
                );
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rotations_are_orthonormal() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let r = random_rotation(&mut rng);
            let rtr = mat_mul(&transpose(&r), &r);
            for (i, row) in rtr.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    assert!((v - if i == j { 1.0 } else { 0.0 }).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn sites_cover_names() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let p = generate(&mut rng, &GenConfig::default());
        assert!(!p.sites.is_empty());
        for s in &p.sites {
            assert_eq!(&p.text[s.start..s.end], s.original);
            assert!(!s.replacements.contains(&s.original));
        }
    }
}
