// Runs the command-line tool on the documented examples.
#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <sys/wait.h>

using json = nlohmann::json;

namespace {

struct Run {
    std::string out;
    int status = -1;
};

Run run(const std::string& exe, const std::string& args) {
    Run r;
    FILE* p = popen((exe + " " + args + " 2>/dev/null").c_str(), "r");
    if (!p) return r;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    int st = pclose(p);
    r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

int failures = 0;

void expect(bool ok, const std::string& what) {
    std::cout << (ok ? "ok   " : "FAIL ") << what << "\n";
    if (!ok) ++failures;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: cli_check <path to ntk_cli>\n";
        return 2;
    }
    std::string exe = argv[1];

    auto f = run(exe, "field info --D 5 --deterministic");
    auto fj = json::parse(f.out);
    expect(f.status == 0 && fj["schema"] == 1 && fj["command"] == "field info", "field info envelope");
    expect(fj["result"]["disc"] == 5 && fj["result"]["class_number"] == 1, "field info: disc 5, h = 1");
    expect(fj["result"]["fundamental_unit"]["a"] == 0 && fj["result"]["fundamental_unit"]["b"] == 1,
           "field info: unit (1 + sqrt 5)/2");

    auto k = run(exe, "kloosterman --field 1 --r1 1 --r2 1 --c 5 --deterministic");
    auto kj = json::parse(k.out);
    expect(k.status == 0 && std::abs(kj["result"]["value"].get<double>() - 0.381966) < 1e-6, "kloosterman value");
    expect(std::abs(kj["result"]["margin"].get<double>() - 0.0854102) < 1e-6, "kloosterman margin");

    auto e = run(exe, "eisen constterm --field 1 --level 5 --deterministic");
    auto ej = json::parse(e.out);
    expect(e.status == 0 && ej["result"]["H_half"] == "1/6", "eisen constterm exact 1/6");

    for (const char* args : {"shifted amplify --modulus 7 --L 5 --Y 60 --system synthetic --seed 9 --deterministic",
                             "spectral bessel --Z 2 --t 0.5 --deterministic", "kloosterman sweep --cmax 30 --out csv"}) {
        auto a = run(exe, args), b = run(exe, args);
        expect(a.status == 0 && a.out == b.out && !a.out.empty(), std::string("byte-identical: ") + args);
    }

    auto u = run(exe, "no-such-command");
    expect(u.status == 64, "unknown subcommand exits 64");
    auto d = run(exe, "shifted dirichlet --s 1.0");
    expect(d.status == 2 && json::parse(d.out).contains("error"), "domain error exits 2 with an error field");
    auto bad = run(exe, "kloosterman --jobs 0");
    expect(bad.status == 2, "invalid parameter exits 2");

    std::cout << (failures ? "FAILED" : "all passed") << "\n";
    return failures ? 1 : 0;
}
