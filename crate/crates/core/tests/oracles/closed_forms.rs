// Generated by closed_forms.py; do not edit.
// (n, p, B, ln BF fixed g = n, ln BF common-variance intrinsic)
#[allow(clippy::excessive_precision)]
pub const CLOSED_FORMS: &[(usize, usize, f64, f64, f64)] = &[
    (10, 1, 0.05, 7.7669881047067423741, 7.7669881047067423741),
    (10, 1, 0.5, 1.5286634796672346726, 1.5286634796672346726),
    (10, 1, 0.95, -0.9896075660421672253, -0.9896075660421672253),
    (10, 1, 1.0, -1.198947636399185272, -1.198947636399185272),
    (10, 5, 0.05, 2.971197559110001286, 2.2389960783641916843),
    (10, 5, 0.5, -3.2671270659295064155, -1.4810575009659139765),
    (10, 5, 0.95, -5.7853981116389083134, -3.4893494627938016186),
    (10, 5, 1.0, -5.9947381819959263602, -3.6658426719835676116),
    (100, 1, 0.05, 137.44881159843298826, 137.44881159843298826),
    (100, 1, 0.5, 31.515536505367587397, 31.515536505367587397),
    (100, 1, 0.95, 0.20566984756382157833, 0.20566984756382157833),
    (100, 1, 1.0, -2.3075602584206297254, -2.3075602584206297254),
    (100, 5, 0.05, 128.21857056475046936, 117.64643685531127529),
    (100, 5, 0.5, 22.285295471685068495, 24.049343447633124664),
    (100, 5, 0.95, -9.0245711861186973234, -6.3770970257301523239),
    (100, 5, 1.0, -11.537801292103148627, -8.8402917489038151984),
    (100, 20, 0.05, 93.60516668844102348, 73.690284465170726149),
    (100, 20, 0.5, -12.328108404624377386, 6.2810190801467823468),
    (
        100,
        20,
        0.95,
        -43.637975062428143205,
        -21.244326519879823247,
    ),
    (100, 20, 1.0, -46.151205168412594509, -23.536402637943298198),
    (10000, 1, 0.05, 14963.069192141821868, 14963.069192141821868),
    (10000, 1, 0.5, 3460.2842340067946909, 3460.2842340067946909),
    (10000, 1, 0.95, 251.8092946494598774, 251.8092946494598774),
    (
        10000,
        1,
        1.0,
        -4.6052201834882580222,
        -4.6052201834882580222,
    ),
    (10000, 5, 0.05, 14944.648311407868836, 14928.475689252971852),
    (10000, 5, 0.5, 3441.8633532728416588, 3443.6100837313371814),
    (10000, 5, 0.95, 233.38841391550684531, 236.08184001864798226),
    (10000, 5, 1.0, -23.026100917441290111, -20.28007009579267755),
    (
        10000,
        20,
        0.05,
        14875.570008655544966,
        14809.907772303932788,
    ),
    (10000, 20, 0.5, 3372.7850505205177885, 3391.5479630115633452),
    (
        10000,
        20,
        0.95,
        164.31011116318297498,
        187.56468890945013331,
    ),
    (
        10000,
        20,
        1.0,
        -92.104403669765160444,
        -68.600145639482764275,
    ),
    (
        1000000,
        1,
        0.05,
        1497848.2312643282772,
        1497848.2312643282772,
    ),
    (
        1000000,
        1,
        0.5,
        346565.83595185339093,
        346565.83595185339093,
    ),
    (
        1000000,
        1,
        0.95,
        25639.687475612964785,
        25639.687475612964785,
    ),
    (
        1000000,
        1,
        1.0,
        -6.9077557789818870522,
        -6.9077557789818870522,
    ),
    (
        1000000,
        5,
        0.05,
        1497820.6002412123496,
        1497804.3475838985712,
    ),
    (
        1000000,
        5,
        0.5,
        346538.20492873746338,
        346539.95146145910733,
    ),
    (
        1000000,
        5,
        0.95,
        25612.056452497037236,
        25614.750346908467266,
    ),
    (
        1000000,
        5,
        1.0,
        -34.538778894909435261,
        -31.792253173229161054,
    ),
    (
        1000000,
        20,
        0.05,
        1497716.9839045276213,
        1497650.2585484846754,
    ),
    (
        1000000,
        20,
        0.5,
        346434.58859205273508,
        346453.35233631098479,
    ),
    (
        1000000,
        20,
        0.95,
        25508.440115812308931,
        25531.70377658511283,
    ),
    (
        1000000,
        20,
        1.0,
        -138.15511557963774104,
        -114.64145800745671803,
    ),
];
