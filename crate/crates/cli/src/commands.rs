use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use triadeform::cocycle::{
    check_witness, ext_of, is_coboundary, is_cot, transport_cocycle, verify_cocycle, AbGroup, GroupMap, SymCocycle2,
};
use triadeform::finite::{Enumerated, Subgroup};
use triadeform::fo::{parse_formula, Evaluator, Model};
use triadeform::psi::{eval_psi, PsiInput};
use triadeform::ring::RingDescriptor;
use triadeform::structure::{
    brute_force_fitting, center_description, commutator_width_check, derived_description, description_subgroup,
    finite_group, fitting_description, torsion_split_check, torus_description, torus_membership, SubgroupDescription,
};
use triadeform::tri::{
    check_presentation, enumerate_group, fn_identity_check, group_order, split_isomorphism, verify_split,
    DeformationSpec, DeformedElem,
};
use triadeform::units::unit_group;

use crate::{CocycleCmd, Command, FoCmd, GroupArgs, GroupCmd, Output, RingCmd, StructureCmd};

pub struct Config {
    pub seed: u64,
    pub trials: u64,
    pub budget: u64,
}

pub struct Report {
    pub body: Value,
    /// False when the checked property fails; the process then exits 1.
    pub ok: bool,
}

type Res<T> = Result<T, String>;

fn report(lemma: &str, ok: bool, mut body: Value) -> Res<Report> {
    body["lemma"] = json!(lemma);
    Ok(Report { body, ok })
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// JSON given inline, as `@path`, or as a path to an existing file.
fn load_json(arg: &str) -> Res<Value> {
    let text = match arg.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?,
        None if std::path::Path::new(arg).is_file() => std::fs::read_to_string(arg).map_err(|e| format!("{arg}: {e}"))?,
        None => arg.to_string(),
    };
    serde_json::from_str(&text).map_err(|e| format!("bad JSON in {arg}: {e}"))
}

/// Formula text, or the contents of the file it names. No `@` prefix here,
/// since formulas use `@` for set membership.
fn load_text(arg: &str) -> Res<String> {
    if std::path::Path::new(arg).is_file() {
        return std::fs::read_to_string(arg).map_err(|e| format!("{arg}: {e}"));
    }
    Ok(arg.to_string())
}

fn ring(text: &str) -> Res<RingDescriptor> {
    RingDescriptor::parse(text).map_err(err)
}

fn load_spec(path: &str) -> Res<DeformationSpec> {
    DeformationSpec::from_json(&load_json(path)?).map_err(err)
}

fn load_cocycle(path: &str) -> Res<SymCocycle2> {
    SymCocycle2::from_json(&load_json(path)?).map_err(err)
}

fn split_pair(arg: &str) -> Res<(&str, &str)> {
    arg.split_once('=').ok_or_else(|| format!("expected NAME=VALUE, got `{arg}`"))
}

pub fn render(body: &Value, output: Output) -> String {
    match output {
        Output::Json => serde_json::to_string_pretty(body).expect("serializable"),
        Output::Text => match body.as_object() {
            Some(map) => map
                .iter()
                .map(|(k, v)| match v {
                    Value::String(s) => format!("{k}: {s}"),
                    other => format!("{k}: {other}"),
                })
                .collect::<Vec<_>>()
                .join("\n"),
            None => body.to_string(),
        },
    }
}

pub fn run(config: &Config, command: &Command) -> Res<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    match command {
        Command::Ring(cmd) => ring_cmd(cmd),
        Command::Ext { b, a } => {
            let (bg, ag) = (AbGroup::parse(b).map_err(err)?, AbGroup::parse(a).map_err(err)?);
            let ext = ext_of(&bg, &ag).map_err(err)?;
            report(
                "Ext",
                true,
                json!({"b": bg.to_string(), "a": ag.to_string(), "ext": ext.to_string(), "order": ext.order().map(|o| o.to_string())}),
            )
        }
        Command::Cocycle(cmd) => seeded(config, cocycle_cmd(config, cmd, &mut rng)),
        Command::Group(cmd) => seeded(config, group_cmd(config, cmd, &mut rng)),
        Command::Structure(cmd) => structure_cmd(cmd),
        Command::Fo(cmd) => fo_cmd(config, cmd),
    }
}

fn seeded(config: &Config, r: Res<Report>) -> Res<Report> {
    r.map(|mut rep| {
        rep.body["seed"] = json!(config.seed);
        rep
    })
}

fn ring_cmd(cmd: &RingCmd) -> Res<Report> {
    match cmd {
        RingCmd::Info { ring: r } => {
            let o = ring(r)?;
            report(
                "ring",
                true,
                json!({
                    "ring": o.to_string(),
                    "finite": o.is_finite(),
                    "cardinality": o.cardinality().map(|c| c.to_string()),
                    "characteristic_zero": o.is_char_zero(),
                    "integral_domain": o.is_integral_domain(),
                }),
            )
        }
        RingCmd::Units { ring: r } => {
            let o = ring(r)?;
            let u = unit_group(&o);
            let torsion: Vec<Value> = u
                .torsion
                .iter()
                .map(|t| json!({"generator": o.format_elem(&t.generator), "order": t.order.to_string()}))
                .collect();
            report(
                "unit-group",
                true,
                json!({
                    "ring": o.to_string(),
                    "torsion_order": u.torsion_order.to_string().parse::<u64>().map(Value::from).unwrap_or_else(|_| json!(u.torsion_order.to_string())),
                    "torsion": torsion,
                    "fundamental_units": u.free_basis.iter().map(|x| o.format_elem(x)).collect::<Vec<_>>(),
                    "free_rank": u.free_rank(),
                }),
            )
        }
        RingCmd::Divides { ring: r, a, b } => {
            let o = ring(r)?;
            let (x, y) = (o.parse_elem(a).map_err(err)?, o.parse_elem(b).map_err(err)?);
            let q = o.exact_quotient(&x, &y).map_err(err)?;
            report(
                "divisibility",
                q.is_some(),
                json!({"divides": q.is_some(), "quotient": q.map(|q| o.format_elem(&q))}),
            )
        }
        RingCmd::Psi { ring: r, s, lambda, alpha, beta, delta, a } => {
            let o = ring(r)?;
            let p = |t: &str| o.parse_elem(t).map_err(err);
            let input = PsiInput { s: *s, lambda: p(lambda)?, alpha: p(alpha)?, beta: p(beta)?, delta: p(delta)?, a: p(a)? };
            let rep = eval_psi(&o, &input).map_err(err)?;
            report("Psi", rep.value, serde_json::to_value(&rep).map_err(err)?)
        }
    }
}

fn cocycle_cmd(config: &Config, cmd: &CocycleCmd, rng: &mut ChaCha8Rng) -> Res<Report> {
    match cmd {
        CocycleCmd::Verify(f) => {
            let c = load_cocycle(&f.file)?;
            let rep = verify_cocycle(&c, config.trials, rng).map_err(err)?;
            report("cocycle-identity", rep.passed(), serde_json::to_value(&rep).map_err(err)?)
        }
        CocycleCmd::IsCoboundary(f) => {
            let c = load_cocycle(&f.file)?;
            match is_coboundary(&c).map_err(err)? {
                Some(psi) => {
                    let verified = check_witness(&c, &psi, config.trials, rng).map_err(err)?;
                    let w = psi.to_json(&c.domain, &c.codomain);
                    let witness = if w == json!({"type": "trivial"}) { json!("1") } else { w };
                    report("coboundary", verified, json!({"coboundary": true, "witness": witness, "witness_verified": verified}))
                }
                None => report("coboundary", false, json!({"coboundary": false, "witness": null})),
            }
        }
        CocycleCmd::IsCot(f) => {
            let c = load_cocycle(&f.file)?;
            let cot = is_cot(&c).map_err(err)?;
            report("CoT", cot, json!({"cot": cot}))
        }
        CocycleCmd::Transport { file, psi, eta, codomain, domain } => {
            let c = load_cocycle(file)?;
            let target = |t: &Option<String>, default: &AbGroup| match t {
                Some(text) => AbGroup::parse(text).map_err(err),
                None => Ok(default.clone()),
            };
            let a2 = target(codomain, &c.codomain)?;
            let b2 = target(domain, &c.domain)?;
            let psi = GroupMap::from_json(&c.codomain, &a2, &load_json(psi)?).map_err(err)?;
            let eta = GroupMap::from_json(&c.domain, &b2, &load_json(eta)?).map_err(err)?;
            let moved = transport_cocycle(&c, &psi, &eta).map_err(err)?;
            let before = is_coboundary(&c).map_err(err)?.is_some();
            let after = is_coboundary(&moved).map_err(err)?.is_some();
            report(
                "split-transport",
                before == after,
                json!({"cocycle": moved.to_json(), "coboundary_before": before, "coboundary_after": after}),
            )
        }
    }
}

fn random_pairs(spec: &DeformationSpec, k: u64, rng: &mut ChaCha8Rng) -> Vec<(DeformedElem, DeformedElem)> {
    (0..k).map(|_| (spec.random_elem(rng, 8), spec.random_elem(rng, 8))).collect()
}

fn group_cmd(config: &Config, cmd: &GroupCmd, rng: &mut ChaCha8Rng) -> Res<Report> {
    match cmd {
        GroupCmd::Build(s) => {
            let spec = load_spec(&s.spec)?;
            let gens = spec.standard_generators().map_err(err)?;
            report(
                "deformation",
                true,
                json!({
                    "group": spec.to_string(),
                    "spec": spec.to_json(),
                    "untwisted": spec.is_untwisted(),
                    "order": group_order(&spec),
                    "generators": gens.iter().map(|g| spec.elem_to_json(g)).collect::<Vec<_>>(),
                }),
            )
        }
        GroupCmd::Mul { spec, x, y } => {
            let spec = load_spec(spec)?;
            let a = spec.elem_from_json(&load_json(x)?).map_err(err)?;
            let b = spec.elem_from_json(&load_json(y)?).map_err(err)?;
            let p = spec.multiply(&a, &b).map_err(err)?;
            report("deformed-product", true, json!({"product": spec.elem_to_json(&p), "text": spec.format_elem(&p)}))
        }
        GroupCmd::CheckPresentation(s) => {
            let spec = load_spec(&s.spec)?;
            let rep = check_presentation(&spec, config.trials, rng).map_err(err)?;
            report("presentation", rep.passed(), serde_json::to_value(&rep).map_err(err)?)
        }
        GroupCmd::FnIdentity(s) => {
            let spec = load_spec(&s.spec)?;
            let rep = fn_identity_check(&spec, config.trials, rng).map_err(err)?;
            report("fn-inverse", rep.passed(), serde_json::to_value(&rep).map_err(err)?)
        }
        GroupCmd::SplitIso(s) => {
            let spec = load_spec(&s.spec)?;
            let iso = match split_isomorphism(&spec) {
                Ok(iso) => iso,
                Err(triadeform::Error::MissingWitness(i)) => {
                    return report("split-iso", false, json!({"split": false, "missing_witness": i}))
                }
                Err(e) => return Err(err(e)),
            };
            let gens = spec.standard_generators().map_err(err)?;
            let mut pairs: Vec<_> = gens.iter().flat_map(|g| gens.iter().map(move |h| (g.clone(), h.clone()))).collect();
            pairs.extend(random_pairs(&spec, config.trials, rng));
            let rep = verify_split(&iso, &pairs).map_err(err)?;
            let mut body = serde_json::to_value(&rep).map_err(err)?;
            body["split"] = json!(rep.passed());
            report("split-iso", rep.passed(), body)
        }
        GroupCmd::Enumerate { spec, list } => {
            let spec = load_spec(spec)?;
            let elems = enumerate_group(&spec).map_err(err)?;
            let mut body = json!({"group": spec.to_string(), "order": elems.len()});
            if *list {
                body["elements"] = json!(elems.iter().map(|g| spec.format_elem(g)).collect::<Vec<_>>());
            }
            report("deformation", true, body)
        }
    }
}

type BruteForce<'a> = dyn Fn(&Enumerated<DeformedElem>) -> Res<Subgroup> + 'a;

fn subgroup_json(en: &Enumerated<DeformedElem>, spec: &DeformationSpec, h: &Subgroup) -> Value {
    json!({
        "order": h.order(),
        "generators": h.generators.iter().map(|&g| spec.format_elem(&en.elements[g as usize])).collect::<Vec<_>>(),
    })
}

/// Reports a described subgroup, sized on finite instances and compared with
/// an independent brute-force computation when asked.
fn described(
    lemma: &str,
    spec: &DeformationSpec,
    desc: &SubgroupDescription,
    brute: Option<&BruteForce>,
) -> Res<Report> {
    if group_order(spec).is_none() {
        if brute.is_some() {
            return Err(format!("{spec} is not finite; --brute-force needs a finite ring"));
        }
        return report(lemma, true, json!({"order": null, "generators": desc.generator_family}));
    }
    let en = finite_group(spec).map_err(err)?;
    let sub = description_subgroup(&en, desc).map_err(err)?;
    let mut body = subgroup_json(&en, spec, &sub);
    body["generator_family"] = json!(desc.generator_family);
    let mut ok = true;
    if let Some(f) = brute {
        let b = f(&en)?;
        ok = b.elements == sub.elements;
        body["brute_force_order"] = json!(b.order());
        body["agrees_with_description"] = json!(ok);
    }
    report(lemma, ok, body)
}

fn structure_cmd(cmd: &StructureCmd) -> Res<Report> {
    let flag = |a: &GroupArgs| a.brute_force;
    match cmd {
        StructureCmd::Center(a) => {
            let spec = load_spec(&a.group)?;
            let brute = |en: &Enumerated<DeformedElem>| Ok(en.group.center());
            described("Z(G)", &spec, &center_description(&spec), flag(a).then_some(&brute as _))
        }
        StructureCmd::Derived(a) => {
            let spec = load_spec(&a.group)?;
            let brute = |en: &Enumerated<DeformedElem>| Ok(en.group.derived_subgroup());
            described("G'-desc", &spec, &derived_description(&spec), flag(a).then_some(&brute as _))
        }
        StructureCmd::Fitting(a) => {
            let spec = load_spec(&a.group)?;
            let bound = (spec.n - 1).max(1);
            let brute = |en: &Enumerated<DeformedElem>| -> Res<Subgroup> {
                let rep = brute_force_fitting(&en.group, bound).map_err(err)?;
                if !rep.passed() {
                    return Err("brute-force Fitting subgroup failed its post-checks".into());
                }
                Ok(rep.subgroup)
            };
            described("Fitt-desc", &spec, &fitting_description(&spec), flag(a).then_some(&brute as _))
        }
        StructureCmd::Width { group, bound } => {
            let spec = load_spec(group)?;
            let en = finite_group(&spec).map_err(err)?;
            let rep = commutator_width_check(&en.group, *bound);
            report("G'-width", rep.passed, serde_json::to_value(&rep).map_err(err)?)
        }
        StructureCmd::Torus { args, index, element } => {
            let spec = load_spec(&args.group)?;
            if let Some(e) = element {
                let x = spec.elem_from_json(&load_json(e)?).map_err(err)?;
                let alpha = torus_membership(&spec, *index, &x).map_err(err)?;
                return report(
                    "torus",
                    true,
                    json!({"member": alpha.is_some(), "alpha": alpha.map(|a| spec.ring.format_elem(&a))}),
                );
            }
            let desc = torus_description(&spec, *index).map_err(err)?;
            let i = *index;
            // d_i(R^×) together with the center
            let brute = |en: &Enumerated<DeformedElem>| -> Res<Subgroup> {
                let units = spec.units.elements().ok_or("unit group is not finite")?;
                let mut gens = en.group.center().elements;
                for u in &units {
                    let d = spec.diag_gen(i, u).map_err(err)?;
                    gens.push(en.index_of(&d).ok_or("generator outside enumeration")?);
                }
                Ok(en.group.closure(&gens))
            };
            described("torus", &spec, &desc, args.brute_force.then_some(&brute as _))
        }
        StructureCmd::Theta { group, index } => {
            let spec = load_spec(group)?;
            let holds = torsion_split_check(&spec, *index).map_err(err)?;
            report("Theta-CoT", holds, json!({"index": index, "holds": holds}))
        }
    }
}

fn fo_cmd(config: &Config, cmd: &FoCmd) -> Res<Report> {
    match cmd {
        FoCmd::Parse { formula } => {
            let f = parse_formula(&load_text(formula)?).map_err(err)?;
            report(
                "fo-syntax",
                true,
                json!({
                    "formula": f.to_string(),
                    "free_vars": f.free_vars(),
                    "sets": f.set_names(),
                    "atoms": f.atom_count(),
                }),
            )
        }
        FoCmd::Eval { model, formula, semantic, defines, constants, assignments } => {
            let spec = load_spec(model)?;
            let en = finite_group(&spec).map_err(err)?;
            let index = |arg: &str| -> Res<u32> {
                let x = spec.elem_from_json(&load_json(arg)?).map_err(err)?;
                en.index_of(&x).ok_or_else(|| format!("{arg} is not an element of {spec}"))
            };
            let mut m = Model::new(en.group.clone());
            for c in constants {
                let (name, v) = split_pair(c)?;
                m = m.with_constant(name, index(v)?).map_err(err)?;
            }
            for d in defines {
                let (name, v) = split_pair(d)?;
                let members = match v {
                    "center" => en.group.center().elements,
                    "derived" => en.group.derived_subgroup().elements,
                    "fitting" => description_subgroup(&en, &fitting_description(&spec)).map_err(err)?.elements,
                    file => {
                        let items = load_json(file)?;
                        let items = items.as_array().ok_or_else(|| format!("{file}: expected a list of elements"))?;
                        items
                            .iter()
                            .map(|x| index(&x.to_string()))
                            .collect::<Res<Vec<u32>>>()?
                    }
                };
                m.register_set(name, &members).map_err(err)?;
            }
            let mut env = BTreeMap::new();
            for a in assignments {
                let (name, v) = split_pair(a)?;
                env.insert(name.to_string(), index(v)?);
            }
            let f = parse_formula(&load_text(formula)?).map_err(err)?;
            let evaluator = if *semantic { Evaluator::semantic() } else { Evaluator::naive() }.with_budget(config.budget);
            let free: Vec<String> = f.free_vars().into_iter().filter(|v| !env.contains_key(v)).collect();
            match free.as_slice() {
                [] => {
                    let out = evaluator.eval(&m, &f, &env).map_err(err)?;
                    report("fo-eval", out.value, json!({"value": out.value, "atoms_evaluated": out.atoms}))
                }
                [var] if env.is_empty() => {
                    let (set, atoms) = evaluator.defining_set(&m, &f, var).map_err(err)?;
                    report(
                        "fo-eval",
                        true,
                        json!({
                            "variable": var,
                            "order": set.len(),
                            "defining_set": set.iter().map(|&i| spec.format_elem(&en.elements[i as usize])).collect::<Vec<_>>(),
                            "atoms_evaluated": atoms,
                        }),
                    )
                }
                _ => Err(format!("assign all free variables but at most one (and then none): {}", free.join(", "))),
            }
        }
    }
}
