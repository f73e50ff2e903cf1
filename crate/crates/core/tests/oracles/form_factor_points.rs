// Frozen from golden.py; shared by the core goldens and the acceptance run.

const PLUS: Branch = Branch::Plus;
const MINUS: Branch = Branch::Minus;

/// `(γ, δ, branch, |A|²)`
pub const FORM_FACTOR: [(f64, f64, Branch, f64); 20] = [
    (0.0, FRAC_PI_2, PLUS, 0.87037219443500881769),
    (0.0, FRAC_PI_2, MINUS, 0.57446688117670018466),
    (0.3, 0.0, PLUS, 0.54922664944679197245),
    (1.7, 0.0, PLUS, 0.72567064798428002976),
    (5.0, 0.0, PLUS, 2.6498312970117540754),
    (0.2, 0.0, MINUS, 0.018370096379582737769),
    (1.0, 0.0, MINUS, 0.44860591233265557278),
    (2.5, 0.0, MINUS, 2.6904706629288146569),
    (6.0, 0.0, MINUS, 24.608111304260735929),
    (12.0, 0.0, MINUS, 676.34552401958918994),
    (0.5, 0.3, PLUS, 0.62971803286148733926),
    (2.0, 1.1, PLUS, 1.0293971876785168544),
    (0.8, 2.5, PLUS, 1.0131673504501389016),
    (3.0, 3.0, PLUS, 1.5707321890670780959),
    (1.0, 0.001, MINUS, 0.44843194594414209528),
    (0.4, 0.7, MINUS, 0.22135594159705731114),
    (2.2, 1.5, MINUS, 1.9516304276687659388),
    (4.0, 2.9, MINUS, 6.6251846965806303532),
    (0.0, 1.0, MINUS, 0.2994393407194001119),
    (7.5, 0.05, MINUS, 57.268793893328956355),
];
