#!/usr/bin/env python3
"""Solve an LP/MILP file with HiGHS and write a `name value` solution file.

Usage: highs_solve.py MODEL.lp SOLUTION.sol

The first line of the solution file is `# status: optimal|infeasible|error`.
Exit status 127 means HiGHS (the `highspy` package) is not installed.
"""
import sys

try:
    import highspy
except ImportError:
    print("highs_solve: the 'highspy' package is not installed", file=sys.stderr)
    sys.exit(127)


def main(argv):
    if len(argv) != 3:
        print(__doc__, file=sys.stderr)
        return 2
    lp_path, sol_path = argv[1], argv[2]

    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.setOptionValue("mip_rel_gap", 0.0)
    h.setOptionValue("mip_abs_gap", 1e-9)
    h.setOptionValue("mip_feasibility_tolerance", 1e-9)
    h.setOptionValue("primal_feasibility_tolerance", 1e-9)
    h.setOptionValue("threads", 1)
    h.setOptionValue("random_seed", 0)

    read = h.readModel(lp_path)
    if read != highspy.HighsStatus.kOk:
        print(f"highs_solve: reading {lp_path} returned {read}", file=sys.stderr)
        return 4

    h.run()
    status = h.getModelStatus()
    with open(sol_path, "w") as out:
        if status == highspy.HighsModelStatus.kOptimal:
            out.write("# status: optimal\n")
            out.write(f"# objective: {h.getInfo().objective_function_value!r}\n")
            lp = h.getLp()
            values = h.getSolution().col_value
            for name, value in zip(lp.col_names_, values):
                out.write(f"{name} {value!r}\n")
        elif status == highspy.HighsModelStatus.kInfeasible:
            out.write("# status: infeasible\n")
        else:
            out.write(f"# status: error ({h.modelStatusToString(status)})\n")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
