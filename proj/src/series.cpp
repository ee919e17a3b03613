#include "landau/series.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "landau/io.hpp"

namespace landau {

DensitySeries::DensitySeries(double t0_, double dt_, std::size_t n_t_, std::vector<std::vector<int>> k_list_)
    : t0(t0_), dt(dt_), n_t(n_t_), k_list(std::move(k_list_)) {
    rho.assign(n_t * k_list.size(), 0.0);
}

int DensitySeries::find(const std::vector<int>& k) const {
    for (std::size_t i = 0; i < k_list.size(); ++i)
        if (k_list[i] == k) return int(i);
    return -1;
}

std::vector<cplx> DensitySeries::column(std::size_t ki) const {
    std::vector<cplx> out(n_t);
    for (std::size_t i = 0; i < n_t; ++i) out[i] = at(i, ki);
    return out;
}

std::string DensitySeries::to_csv() const {
    std::ostringstream out;
    const std::size_t d = k_list.empty() ? 1 : k_list.front().size();
    out << "t";
    for (std::size_t a = 0; a < d; ++a) out << ",k" << (a + 1);
    out << ",re,im,stale\n";
    for (std::size_t i = 0; i < n_t; ++i) {
        const std::string ts = format_double(t(i));
        for (std::size_t ki = 0; ki < k_list.size(); ++ki) {
            out << ts;
            for (int c : k_list[ki]) out << ',' << c;
            const cplx v = at(i, ki);
            out << ',' << format_double(v.real()) << ',' << format_double(v.imag()) << ','
                << (is_stale(i, ki) ? 1 : 0) << '\n';
        }
    }
    return out.str();
}

DensitySeries DensitySeries::from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw IoError("density CSV is empty");
    std::vector<std::string> cols;
    {
        std::istringstream hs(line);
        std::string c;
        while (std::getline(hs, c, ',')) cols.push_back(c);
    }
    if (cols.size() < 4 || cols[0] != "t") throw IoError("density CSV header must start with t,k1,...");
    std::size_t d = 0;
    while (1 + d < cols.size() && cols[1 + d].size() > 1 && cols[1 + d][0] == 'k') ++d;
    if (d == 0 || cols.size() < 3 + d) throw IoError("density CSV header lacks k or re/im columns");
    const bool has_stale = cols.size() > 3 + d && cols[3 + d] == "stale";

    struct Row {
        double t;
        std::vector<int> k;
        cplx v;
        bool stale;
    };
    std::vector<Row> rows;
    std::vector<double> times;
    std::vector<std::vector<int>> ks;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string c;
        std::vector<std::string> f;
        while (std::getline(ls, c, ',')) f.push_back(c);
        if (f.size() < 3 + d) throw IoError("density CSV row has too few columns: " + line);
        Row r;
        r.t = std::stod(f[0]);
        for (std::size_t a = 0; a < d; ++a) r.k.push_back(std::stoi(f[1 + a]));
        r.v = {std::stod(f[1 + d]), std::stod(f[2 + d])};
        r.stale = has_stale && f.size() > 3 + d && std::stoi(f[3 + d]) != 0;
        if (times.empty() || times.back() != r.t) {
            if (std::find(times.begin(), times.end(), r.t) == times.end()) times.push_back(r.t);
        }
        if (std::find(ks.begin(), ks.end(), r.k) == ks.end()) ks.push_back(r.k);
        rows.push_back(std::move(r));
    }
    if (times.empty()) throw IoError("density CSV has no rows");
    const double dt = times.size() > 1 ? times[1] - times[0] : 0.0;
    for (std::size_t i = 1; i < times.size(); ++i) {
        const double expect = times[0] + dt * double(i);
        if (std::abs(times[i] - expect) > 1e-9 * std::max(1.0, std::abs(expect)))
            throw IoError("density CSV time grid is not uniform");
    }
    DensitySeries s(times[0], dt, times.size(), ks);
    bool any_stale = false;
    std::vector<std::uint8_t> st(s.rho.size(), 0);
    for (const auto& r : rows) {
        const std::size_t ti = std::size_t(std::llround(dt != 0.0 ? (r.t - times[0]) / dt : 0.0));
        const std::size_t ki = std::size_t(s.find(r.k));
        s.at(ti, ki) = r.v;
        if (r.stale) {
            st[ti * ks.size() + ki] = 1;
            any_stale = true;
        }
    }
    if (any_stale) s.stale = std::move(st);
    return s;
}

}  // namespace landau
