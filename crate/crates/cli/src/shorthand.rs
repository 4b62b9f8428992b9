//! Colon-delimited potential descriptors for the command line.
//!
//! ```text
//! thooft:A:L[:A:L...]         1 + Σ L²/|x − A|², A real `t` or quaternion `w,x,y,z`
//! quadric:C0:C2               C0 + C2 |x|²
//! halfplane:B:Q[:B:Q...]      Im(z − Σ Q/(z − B))
//! zeros:X,Y[:X,Y...]          half-plane potential with Higgs zeros at X + iY
//! disc-family:C[:RE,IM][:p1|p2]
//! fhp1 | fhp2
//! lifted:<descriptor>         φ(t + i r)/r on R⁴
//! generic:NAME | generic-nonharmonic
//! ```

use hypvortex::potentials::named_generic;
use hypvortex::potentials::lift_potential;
use hypvortex::{Complex64, Cut, Quaternion, SuperPotential};

fn num(s: &str) -> Result<f64, String> {
    s.trim().parse::<f64>().map_err(|_| format!("not a number: {s:?}"))
}

fn nums(s: &str) -> Result<Vec<f64>, String> {
    s.split(',').map(num).collect()
}

fn pairs<'a>(parts: &[&'a str], what: &str) -> Result<Vec<(&'a str, &'a str)>, String> {
    if parts.is_empty() || parts.len() % 2 != 0 {
        return Err(format!("{what} takes pairs of values"));
    }
    Ok(parts.chunks(2).map(|c| (c[0], c[1])).collect())
}

pub fn parse(desc: &str) -> Result<SuperPotential, String> {
    let desc = desc.trim();
    let (head, rest) = desc.split_once(':').unwrap_or((desc, ""));
    let parts: Vec<&str> = if rest.is_empty() { vec![] } else { rest.split(':').collect() };
    let core = |r: hypvortex::Result<SuperPotential>| r.map_err(|e| e.to_string());
    match head {
        "thooft" => {
            let mut centers = Vec::new();
            let mut scales = Vec::new();
            for (a, l) in pairs(&parts, "thooft")? {
                let v = nums(a)?;
                centers.push(match v.as_slice() {
                    [t] => Quaternion::real(*t),
                    [w, x, y, z] => Quaternion::new(*w, *x, *y, *z),
                    _ => return Err(format!("center {a:?} must have 1 or 4 components")),
                });
                scales.push(num(l)?);
            }
            core(SuperPotential::thooft(centers, scales))
        }
        "quadric" => match parts.as_slice() {
            [c0, c2] => Ok(SuperPotential::Quadric { c0: num(c0)?, c2: num(c2)? }),
            _ => Err("quadric takes C0:C2".into()),
        },
        "halfplane" => {
            let (b, q): (Vec<_>, Vec<_>) = pairs(&parts, "halfplane")?.into_iter().unzip();
            core(SuperPotential::halfplane(
                b.into_iter().map(num).collect::<Result<_, _>>()?,
                q.into_iter().map(num).collect::<Result<_, _>>()?,
            ))
        }
        "zeros" => {
            let zs = parts
                .iter()
                .map(|p| match nums(p)?.as_slice() {
                    [x, y] => Ok(Complex64::new(*x, *y)),
                    _ => Err(format!("zero {p:?} must be X,Y")),
                })
                .collect::<Result<Vec<_>, String>>()?;
            if zs.is_empty() {
                return Err("zeros needs at least one X,Y".into());
            }
            core(SuperPotential::halfplane_from_zeros(&zs))
        }
        "disc-family" => {
            let Some((c, more)) = parts.split_first() else {
                return Err("disc-family needs C".into());
            };
            let mut eps = Complex64::new(1.0, 0.0);
            let mut cut = Cut::P2;
            for m in more {
                match m.to_ascii_lowercase().as_str() {
                    "p1" => cut = Cut::P1,
                    "p2" => cut = Cut::P2,
                    _ => match nums(m)?.as_slice() {
                        [re, im] => eps = Complex64::new(*re, *im),
                        _ => return Err(format!("disc-family option {m:?} is neither RE,IM nor a cut")),
                    },
                }
            }
            core(SuperPotential::disc_family(num(c)?, eps, cut))
        }
        "fhp1" if parts.is_empty() => Ok(SuperPotential::Fhp1),
        "fhp2" if parts.is_empty() => Ok(SuperPotential::Fhp2),
        "lifted" if !rest.is_empty() => Ok(lift_potential(&parse(rest)?)),
        "generic" if parts.len() == 1 => core(named_generic(parts[0])),
        "generic-nonharmonic" if parts.is_empty() => core(named_generic("nonharmonic-quadric")),
        _ => Err(format!("unknown potential descriptor {desc:?}")),
    }
}
