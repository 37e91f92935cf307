//! Adaptive DOP853 integration of the rotating-frame equations of motion.
//!
//! Eighth-order Dormand–Prince pair with the 5th/3rd-order error estimate,
//! stabilized step control and the 7th-order continuous extension used for
//! output at requested times.

use serde::Serialize;

use crate::error::{ErfbpError, Result};
use crate::model::{jacobi_constant, PhaseState, PrimaryConfiguration};

#[derive(Debug, Clone, PartialEq)]
pub enum SampleTimes {
    /// One sample per accepted step.
    Steps,
    /// `n` equal intervals between 0 and t_end.
    Uniform(usize),
    At(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntegratorOptions {
    pub tol: f64,
    pub samples: SampleTimes,
    pub escape_radius: f64,
    pub max_steps: usize,
}

impl IntegratorOptions {
    pub fn new(tol: f64) -> Self {
        Self { tol, samples: SampleTimes::Steps, escape_radius: 20.0, max_steps: 10_000_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TrajectoryTermination {
    Completed,
    Collision,
    Escape,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    /// Samples ordered along the direction of integration.
    pub samples: Vec<(f64, PhaseState)>,
    pub jacobi_drift: f64,
    pub termination: TrajectoryTermination,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
}

pub fn integrate(
    state0: PhaseState,
    config: &PrimaryConfiguration,
    t_end: f64,
    tol: f64,
) -> Result<Trajectory> {
    integrate_with(state0, config, t_end, &IntegratorOptions::new(tol))
}

type V = [f64; 4];

fn axpy(y: &V, h: f64, terms: &[(f64, &V)]) -> V {
    let mut out = *y;
    for (c, k) in terms {
        for i in 0..4 {
            out[i] += h * c * k[i];
        }
    }
    out
}

fn lin(terms: &[(f64, &V)]) -> V {
    let mut out = [0.0; 4];
    for (c, k) in terms {
        for i in 0..4 {
            out[i] += c * k[i];
        }
    }
    out
}

struct Field<'a> {
    config: &'a PrimaryConfiguration,
}

impl Field<'_> {
    fn eval(&self, y: &V) -> Option<V> {
        let p = [y[0], y[1]];
        if self.config.nearest_primary(p).1 <= self.config.collision_tol || !y.iter().all(|v| v.is_finite()) {
            return None;
        }
        let g = self.config.gradient(p);
        Some([y[2], y[3], 2.0 * y[3] + g[0], -2.0 * y[2] + g[1]])
    }
}

/// Stage derivatives of one accepted step, kept for dense output.
struct StepData {
    t: f64,
    h: f64,
    y: V,
    y_new: V,
    k: [V; 13],
}

impl StepData {
    fn dense(&self, f: &Field) -> Option<[V; 8]> {
        let (h, y, k) = (self.h, &self.y, &self.k);
        let [k1, _, _, _, _, k6, k7, k8, k9, k10, k11, k12, k13] = k;
        let ydiff = lin(&[(1.0, &self.y_new), (-1.0, y)]);
        let bspl = lin(&[(h, k1), (-1.0, &ydiff)]);
        let c4 = lin(&[(1.0, &ydiff), (-h, k13), (-1.0, &bspl)]);
        let base = |d: &[f64; 12]| {
            lin(&[
                (d[0], k1),
                (d[1], k6),
                (d[2], k7),
                (d[3], k8),
                (d[4], k9),
                (d[5], k10),
                (d[6], k11),
                (d[7], k12),
            ])
        };
        let k14 = f.eval(&axpy(
            y,
            h,
            &[(A141, k1), (A147, k7), (A148, k8), (A149, k9), (A1410, k10), (A1411, k11), (A1412, k12), (A1413, k13)],
        ))?;
        let k15 = f.eval(&axpy(
            y,
            h,
            &[(A151, k1), (A156, k6), (A157, k7), (A158, k8), (A1511, k11), (A1512, k12), (A1513, k13), (A1514, &k14)],
        ))?;
        let k16 = f.eval(&axpy(
            y,
            h,
            &[(A161, k1), (A166, k6), (A167, k7), (A168, k8), (A169, k9), (A1613, k13), (A1614, &k14), (A1615, &k15)],
        ))?;
        let finish = |d: &[f64; 12]| {
            let b = base(d);
            let e = lin(&[(1.0, &b), (d[8], k13), (d[9], &k14), (d[10], &k15), (d[11], &k16)]);
            e.map(|v| v * h)
        };
        Some([*y, ydiff, bspl, c4, finish(&D4), finish(&D5), finish(&D6), finish(&D7)])
    }
}

fn interpolate(cont: &[V; 8], s: f64) -> V {
    let s1 = 1.0 - s;
    let mut out = [0.0; 4];
    for i in 0..4 {
        let conpar = cont[4][i] + s * (cont[5][i] + s1 * (cont[6][i] + s * cont[7][i]));
        out[i] = cont[0][i] + s * (cont[1][i] + s1 * (cont[2][i] + s * (cont[3][i] + s1 * conpar)));
    }
    out
}

pub fn integrate_with(
    state0: PhaseState,
    config: &PrimaryConfiguration,
    t_end: f64,
    opts: &IntegratorOptions,
) -> Result<Trajectory> {
    if !(1e-14..=1e-6).contains(&opts.tol) {
        return Err(ErfbpError::InvalidInput(format!("tolerance {} outside [1e-14, 1e-6]", opts.tol)));
    }
    if !t_end.is_finite() {
        return Err(ErfbpError::InvalidInput("t_end must be finite".into()));
    }
    let y0 = state0.to_array();
    if !y0.iter().all(|v| v.is_finite()) {
        return Err(ErfbpError::InvalidInput("non-finite initial state".into()));
    }
    config.check_position(state0.position())?;
    let c0 = jacobi_constant(&state0, config)?;
    let dir = if t_end < 0.0 { -1.0 } else { 1.0 };

    let mut out_times: Vec<f64> = match &opts.samples {
        SampleTimes::Steps => Vec::new(),
        SampleTimes::Uniform(n) => {
            let n = (*n).max(1);
            (0..=n).map(|k| t_end * k as f64 / n as f64).collect()
        }
        SampleTimes::At(ts) => {
            let mut v: Vec<f64> = ts.iter().copied().filter(|t| t * dir >= 0.0 && t * dir <= t_end * dir).collect();
            v.sort_by(|a, b| (a * dir).total_cmp(&(b * dir)));
            v.dedup();
            v
        }
    };
    out_times.reverse();
    let stepwise = matches!(opts.samples, SampleTimes::Steps);

    let field = Field { config };
    let mut samples: Vec<(f64, PhaseState)> = Vec::new();
    let record = |t: f64, y: &V, samples: &mut Vec<(f64, PhaseState)>| {
        samples.push((t, PhaseState::from_array(*y)));
    };
    // initial sample
    if stepwise || out_times.last() == Some(&0.0) {
        record(0.0, &y0, &mut samples);
        if !stepwise {
            out_times.pop();
        }
    }

    let (rtol, atol) = (opts.tol, opts.tol);
    let mut t = 0.0;
    let mut y = y0;
    let mut k1 = field.eval(&y).expect("initial position checked");
    let mut h = initial_step(&field, &y, &k1, dir, rtol, atol, t_end.abs().max(1e-300));
    let mut facold: f64 = 1e-4;
    let (beta, safe): (f64, f64) = (0.04, 0.9);
    let expo1 = 1.0 / 8.0 - beta * 0.2;
    let (facc1, facc2): (f64, f64) = (1.0 / 0.333, 1.0 / 6.0);
    let mut accepted = 0;
    let mut rejected = 0;
    let mut last_rejected = false;
    let mut termination = TrajectoryTermination::Completed;

    while (t_end - t) * dir > 0.0 {
        if accepted + rejected >= opts.max_steps {
            return Err(ErfbpError::InvalidInput("step budget exhausted".into()));
        }
        if h.abs() < 1e-14 * t.abs().max(1.0) {
            termination = TrajectoryTermination::Collision;
            break;
        }
        if (t + h - t_end) * dir > 0.0 {
            h = t_end - t;
        }
        let Some((k, y_new, err)) = dop853_step(&field, &y, &k1, h, rtol, atol) else {
            // a stage landed on a primary
            h *= 0.25;
            rejected += 1;
            last_rejected = true;
            continue;
        };
        let fac11 = err.powf(expo1);
        let fac = facc2.max(facc1.min(fac11 / facold.powf(beta) / safe));
        let mut h_new = h / fac;
        if err <= 1.0 {
            facold = err.max(1e-4);
            accepted += 1;
            let Some(k13) = field.eval(&y_new) else {
                termination = TrajectoryTermination::Collision;
                break;
            };
            let mut all = [[0.0; 4]; 13];
            all[..12].copy_from_slice(&k);
            all[12] = k13;
            let step = StepData { t, h, y, y_new, k: all };
            let t_new = if (t + h - t_end) * dir >= 0.0 { t_end } else { t + h };
            if !stepwise {
                let mut cont = None;
                while let Some(&to) = out_times.last() {
                    if (to - t_new) * dir > 0.0 {
                        break;
                    }
                    if cont.is_none() {
                        cont = step.dense(&field);
                    }
                    let yo = match &cont {
                        Some(c) => interpolate(c, (to - step.t) / step.h),
                        None => y_new,
                    };
                    record(to, &yo, &mut samples);
                    out_times.pop();
                }
            } else {
                record(t_new, &y_new, &mut samples);
            }
            t = t_new;
            y = y_new;
            k1 = k13;
            if y[0].hypot(y[1]) > opts.escape_radius {
                if !stepwise && samples.last().map(|s| s.0) != Some(t) {
                    record(t, &y, &mut samples);
                }
                termination = TrajectoryTermination::Escape;
                break;
            }
            if last_rejected {
                h_new = dir * h_new.abs().min(h.abs());
            }
            last_rejected = false;
        } else {
            h_new = h / facc1.min(fac11 / safe);
            rejected += 1;
            last_rejected = true;
        }
        h = h_new;
    }

    let mut drift: f64 = 0.0;
    for (_, s) in &samples {
        if let Ok(c) = jacobi_constant(s, config) {
            drift = drift.max((c - c0).abs());
        }
    }
    Ok(Trajectory { samples, jacobi_drift: drift, termination, accepted_steps: accepted, rejected_steps: rejected })
}

fn initial_step(f: &Field, y: &V, k1: &V, dir: f64, rtol: f64, atol: f64, span: f64) -> f64 {
    let sk: Vec<f64> = y.iter().map(|v| atol + rtol * v.abs()).collect();
    let dnf: f64 = (0..4).map(|i| (k1[i] / sk[i]).powi(2)).sum();
    let dny: f64 = (0..4).map(|i| (y[i] / sk[i]).powi(2)).sum();
    let mut h = if dnf <= 1e-10 || dny <= 1e-10 { 1e-6 } else { (dny / dnf).sqrt() * 0.01 };
    h = h.min(span) * dir;
    let y1 = axpy(y, h, &[(1.0, k1)]);
    let Some(k2) = f.eval(&y1) else { return 1e-6 * dir };
    let der2 = ((0..4).map(|i| ((k2[i] - k1[i]) / sk[i]).powi(2)).sum::<f64>()).sqrt() / h.abs();
    let der12 = der2.max(dnf.sqrt());
    let h1 = if der12 <= 1e-15 { (h.abs() * 1e-3).max(1e-6) } else { (0.01 / der12).powf(1.0 / 8.0) };
    (100.0 * h.abs()).min(h1).min(span) * dir
}

/// One DOP853 step; returns the twelve stages, the new state and the scaled error.
fn dop853_step(f: &Field, y: &V, k1: &V, h: f64, rtol: f64, atol: f64) -> Option<([V; 12], V, f64)> {
    let k2 = f.eval(&axpy(y, h, &[(A21, k1)]))?;
    let k3 = f.eval(&axpy(y, h, &[(A31, k1), (A32, &k2)]))?;
    let k4 = f.eval(&axpy(y, h, &[(A41, k1), (A43, &k3)]))?;
    let k5 = f.eval(&axpy(y, h, &[(A51, k1), (A53, &k3), (A54, &k4)]))?;
    let k6 = f.eval(&axpy(y, h, &[(A61, k1), (A64, &k4), (A65, &k5)]))?;
    let k7 = f.eval(&axpy(y, h, &[(A71, k1), (A74, &k4), (A75, &k5), (A76, &k6)]))?;
    let k8 = f.eval(&axpy(y, h, &[(A81, k1), (A84, &k4), (A85, &k5), (A86, &k6), (A87, &k7)]))?;
    let k9 = f.eval(&axpy(y, h, &[(A91, k1), (A94, &k4), (A95, &k5), (A96, &k6), (A97, &k7), (A98, &k8)]))?;
    let k10 = f.eval(&axpy(
        y,
        h,
        &[(A101, k1), (A104, &k4), (A105, &k5), (A106, &k6), (A107, &k7), (A108, &k8), (A109, &k9)],
    ))?;
    let k11 = f.eval(&axpy(
        y,
        h,
        &[(A111, k1), (A114, &k4), (A115, &k5), (A116, &k6), (A117, &k7), (A118, &k8), (A119, &k9), (A1110, &k10)],
    ))?;
    let k12 = f.eval(&axpy(
        y,
        h,
        &[
            (A121, k1),
            (A124, &k4),
            (A125, &k5),
            (A126, &k6),
            (A127, &k7),
            (A128, &k8),
            (A129, &k9),
            (A1210, &k10),
            (A1211, &k11),
        ],
    ))?;
    let b = lin(&[
        (B1, k1),
        (B6, &k6),
        (B7, &k7),
        (B8, &k8),
        (B9, &k9),
        (B10, &k10),
        (B11, &k11),
        (B12, &k12),
    ]);
    let y_new = axpy(y, h, &[(1.0, &b)]);
    let mut err = 0.0;
    let mut err2 = 0.0;
    for i in 0..4 {
        let sk = atol + rtol * y[i].abs().max(y_new[i].abs());
        let e2 = b[i] - BHH1 * k1[i] - BHH2 * k9[i] - BHH3 * k12[i];
        err2 += (e2 / sk).powi(2);
        let e = ER1 * k1[i]
            + ER6 * k6[i]
            + ER7 * k7[i]
            + ER8 * k8[i]
            + ER9 * k9[i]
            + ER10 * k10[i]
            + ER11 * k11[i]
            + ER12 * k12[i];
        err += (e / sk).powi(2);
    }
    let mut deno = err + 0.01 * err2;
    if deno <= 0.0 {
        deno = 1.0;
    }
    let err = h.abs() * err * (1.0 / (4.0 * deno)).sqrt();
    if !err.is_finite() {
        return None;
    }
    Some(([*k1, k2, k3, k4, k5, k6, k7, k8, k9, k10, k11, k12], y_new, err))
}

const A21: f64 = 5.26001519587677318785587544488E-2;
const A31: f64 = 1.97250569845378994544595329183E-2;
const A32: f64 = 5.91751709536136983633785987549E-2;
const A41: f64 = 2.95875854768068491816892993775E-2;
const A43: f64 = 8.87627564304205475450678981324E-2;
const A51: f64 = 2.41365134159266685502369798665E-1;
const A53: f64 = -8.84549479328286085344864962717E-1;
const A54: f64 = 9.24834003261792003115737966543E-1;
const A61: f64 = 3.7037037037037037037037037037E-2;
const A64: f64 = 1.70828608729473871279604482173E-1;
const A65: f64 = 1.25467687566822425016691814123E-1;
const A71: f64 = 3.7109375E-2;
const A74: f64 = 1.70252211019544039314978060272E-1;
const A75: f64 = 6.02165389804559606850219397283E-2;
const A76: f64 = -1.7578125E-2;
const A81: f64 = 3.70920001185047927108779319836E-2;
const A84: f64 = 1.70383925712239993810214054705E-1;
const A85: f64 = 1.07262030446373284651809199168E-1;
const A86: f64 = -1.53194377486244017527936158236E-2;
const A87: f64 = 8.27378916381402288758473766002E-3;
const A91: f64 = 6.24110958716075717114429577812E-1;
const A94: f64 = -3.36089262944694129406857109825E0;
const A95: f64 = -8.68219346841726006818189891453E-1;
const A96: f64 = 2.75920996994467083049415600797E1;
const A97: f64 = 2.01540675504778934086186788979E1;
const A98: f64 = -4.34898841810699588477366255144E1;
const A101: f64 = 4.77662536438264365890433908527E-1;
const A104: f64 = -2.48811461997166764192642586468E0;
const A105: f64 = -5.90290826836842996371446475743E-1;
const A106: f64 = 2.12300514481811942347288949897E1;
const A107: f64 = 1.52792336328824235832596922938E1;
const A108: f64 = -3.32882109689848629194453265587E1;
const A109: f64 = -2.03312017085086261358222928593E-2;
const A111: f64 = -9.3714243008598732571704021658E-1;
const A114: f64 = 5.18637242884406370830023853209E0;
const A115: f64 = 1.09143734899672957818500254654E0;
const A116: f64 = -8.14978701074692612513997267357E0;
const A117: f64 = -1.85200656599969598641566180701E1;
const A118: f64 = 2.27394870993505042818970056734E1;
const A119: f64 = 2.49360555267965238987089396762E0;
const A1110: f64 = -3.0467644718982195003823669022E0;
const A121: f64 = 2.27331014751653820792359768449E0;
const A124: f64 = -1.05344954667372501984066689879E1;
const A125: f64 = -2.00087205822486249909675718444E0;
const A126: f64 = -1.79589318631187989172765950534E1;
const A127: f64 = 2.79488845294199600508499808837E1;
const A128: f64 = -2.85899827713502369474065508674E0;
const A129: f64 = -8.87285693353062954433549289258E0;
const A1210: f64 = 1.23605671757943030647266201528E1;
const A1211: f64 = 6.43392746015763530355970484046E-1;

const A141: f64 = 5.61675022830479523392909219681E-2;
const A147: f64 = 2.53500210216624811088794765333E-1;
const A148: f64 = -2.46239037470802489917441475441E-1;
const A149: f64 = -1.24191423263816360469010140626E-1;
const A1410: f64 = 1.5329179827876569731206322685E-1;
const A1411: f64 = 8.20105229563468988491666602057E-3;
const A1412: f64 = 7.56789766054569976138603589584E-3;
const A1413: f64 = -8.298E-3;
const A151: f64 = 3.18346481635021405060768473261E-2;
const A156: f64 = 2.83009096723667755288322961402E-2;
const A157: f64 = 5.35419883074385676223797384372E-2;
const A158: f64 = -5.49237485713909884646569340306E-2;
const A1511: f64 = -1.08347328697249322858509316994E-4;
const A1512: f64 = 3.82571090835658412954920192323E-4;
const A1513: f64 = -3.40465008687404560802977114492E-4;
const A1514: f64 = 1.41312443674632500278074618366E-1;
const A161: f64 = -4.28896301583791923408573538692E-1;
const A166: f64 = -4.69762141536116384314449447206E0;
const A167: f64 = 7.68342119606259904184240953878E0;
const A168: f64 = 4.06898981839711007970213554331E0;
const A169: f64 = 3.56727187455281109270669543021E-1;
const A1613: f64 = -1.39902416515901462129418009734E-3;
const A1614: f64 = 2.9475147891527723389556272149E0;
const A1615: f64 = -9.15095847217987001081870187138E0;

const B1: f64 = 5.42937341165687622380535766363E-2;
const B6: f64 = 4.45031289275240888144113950566E0;
const B7: f64 = 1.89151789931450038304281599044E0;
const B8: f64 = -5.8012039600105847814672114227E0;
const B9: f64 = 3.1116436695781989440891606237E-1;
const B10: f64 = -1.52160949662516078556178806805E-1;
const B11: f64 = 2.01365400804030348374776537501E-1;
const B12: f64 = 4.47106157277725905176885569043E-2;

const BHH1: f64 = 0.244094488188976377952755905512E+00;
const BHH2: f64 = 0.733846688281611857341361741547E+00;
const BHH3: f64 = 0.220588235294117647058823529412E-01;

const ER1: f64 = 0.1312004499419488073250102996E-01;
const ER6: f64 = -0.1225156446376204440720569753E+01;
const ER7: f64 = -0.4957589496572501915214079952E+00;
const ER8: f64 = 0.1664377182454986536961530415E+01;
const ER9: f64 = -0.3503288487499736816886487290E+00;
const ER10: f64 = 0.3341791187130174790297318841E+00;
const ER11: f64 = 0.8192320648511571246570742613E-01;
const ER12: f64 = -0.2235530786388629525884427845E-01;

// dense output rows: k1, k6..k12 coefficients, then k13..k16
const D4: [f64; 12] = [
    -0.84289382761090128651353491142E+01,
    0.56671495351937776962531783590E+00,
    -0.30689499459498916912797304727E+01,
    0.23846676565120698287728149680E+01,
    0.21170345824450282767155149946E+01,
    -0.87139158377797299206789907490E+00,
    0.22404374302607882758541771650E+01,
    0.63157877876946881815570249290E+00,
    -0.88990336451333310820698117400E-01,
    0.18148505520854727256656404962E+02,
    -0.91946323924783554000451984436E+01,
    -0.44360363875948939664310572000E+01,
];
const D5: [f64; 12] = [
    0.10427508642579134603413151009E+02,
    0.24228349177525818288430175319E+03,
    0.16520045171727028198505394887E+03,
    -0.37454675472269020279518312152E+03,
    -0.22113666853125306036270938578E+02,
    0.77334326684722638389603898808E+01,
    -0.30674084731089398182061213626E+02,
    -0.93321305264302278729567221706E+01,
    0.15697238121770843886131091075E+02,
    -0.31139403219565177677282850411E+02,
    -0.93529243588444783865713862664E+01,
    0.35816841486394083752465898540E+02,
];
const D6: [f64; 12] = [
    0.19985053242002433820987653617E+02,
    -0.38703730874935176555105901742E+03,
    -0.18917813819516756882830838328E+03,
    0.52780815920542364900561016686E+03,
    -0.11573902539959630126141871134E+02,
    0.68812326946963000169666922661E+01,
    -0.10006050966910838403183860980E+01,
    0.77771377980534432092869265740E+00,
    -0.27782057523535084065932004339E+01,
    -0.60196695231264120758267380846E+02,
    0.84320405506677161018159903784E+02,
    0.11992291136182789328035130030E+02,
];
const D7: [f64; 12] = [
    -0.25693933462703749003312586129E+02,
    -0.15418974869023643374053993627E+03,
    -0.23152937917604549567536039109E+03,
    0.35763911791061412378285349910E+03,
    0.93405324183624310003907691704E+02,
    -0.37458323136451633156875139351E+02,
    0.10409964950896230045147246184E+03,
    0.29840293426660503123344363579E+02,
    -0.43533456590011143754432175058E+02,
    0.96324553959188282948394950600E+02,
    -0.39177261675615439165231486172E+02,
    -0.14972683625798562581422125276E+03,
];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_configuration, MassTriple};

    #[test]
    fn dense_output_matches_steps() {
        let c = build_configuration(MassTriple::from_pair(0.3, 0.3).unwrap()).unwrap();
        let s0 = PhaseState::new(1.4, 0.1, 0.0, -0.3);
        let fine = integrate_with(s0, &c, 5.0, &IntegratorOptions::new(1e-13)).unwrap();
        let opts = IntegratorOptions { samples: SampleTimes::Uniform(50), ..IntegratorOptions::new(1e-10) };
        let coarse = integrate_with(s0, &c, 5.0, &opts).unwrap();
        assert_eq!(coarse.samples.len(), 51);
        let end_f = fine.samples.last().unwrap().1;
        let end_c = coarse.samples.last().unwrap().1;
        assert!((end_f.x - end_c.x).abs() < 1e-7);
        // interior sample against a tight run ending exactly there
        let mid = integrate_with(s0, &c, 2.5, &IntegratorOptions::new(1e-13)).unwrap();
        let m = mid.samples.last().unwrap().1;
        let d = coarse.samples[25].1;
        assert!((m.x - d.x).abs() < 1e-7 && (m.vy - d.vy).abs() < 1e-7);
    }

    #[test]
    fn stable_equilibrium_stays_fixed() {
        let c = build_configuration(MassTriple::from_pair(0.02, 0.015).unwrap()).unwrap();
        let p = crate::equilibria::refine_root([0.63, -0.762], &c, 1e-11).unwrap().point.position;
        let tr = integrate(PhaseState::at_rest(p), &c, 10.0, 1e-12).unwrap();
        assert_eq!(tr.termination, TrajectoryTermination::Completed);
        assert!(tr.samples.iter().all(|(_, s)| (s.x - p[0]).hypot(s.y - p[1]) < 1e-10));
    }

    #[test]
    fn rejects_bad_tolerance() {
        let c = build_configuration(MassTriple::new(1.0, 1.0, 1.0).unwrap()).unwrap();
        assert!(integrate(PhaseState::new(0.1, 0.0, 0.0, 0.0), &c, 1.0, 1e-3).is_err());
    }
}
