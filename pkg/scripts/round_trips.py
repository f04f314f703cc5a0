"""Round trips x -> Upsilon^{-1}(x, n) -> Upsilon for x in {-2, -gamma0}."""

import argparse

from negbeta.exchange import phi_apply, upsilon, upsilon_inverse_report
from negbeta.numeration import Base, characteristic_sequence, golden_base, rational_characteristic_digits


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--levels", type=int, default=3)
    p.add_argument("--digits", type=int, default=60)
    args = p.parse_args()
    print("x,n,beta_n,round_trip_error,digits_agreeing")
    for name, x in [("-2", Base.integer(-2)), ("-gamma0", golden_base())]:
        d_x = characteristic_sequence(x)
        for n in range(args.levels):
            rep = upsilon_inverse_report(x, n)
            back = upsilon(rep["base"], level=n)
            err = float(back.value(128) - x.value(128))
            target = phi_apply(d_x, n + 1).prefix(args.digits)
            agree = 0
            for q in rep["interval"]:
                e = rational_characteristic_digits(q, args.digits)
                agree = max(agree, next((k for k in range(args.digits) if e[k] != target[k]), args.digits))
            print(f"{name},{n},{float(rep['base'].value(64)):.15f},{err:.2e},{agree}")


if __name__ == "__main__":
    main()
