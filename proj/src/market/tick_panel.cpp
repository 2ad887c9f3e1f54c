#include "arrkit/market/tick_panel.hpp"

#include <algorithm>
#include <fstream>
#include <string_view>
#include <unordered_map>

#include "arrkit/core/error.hpp"
#include "arrkit/core/text.hpp"

namespace arrkit::market {

std::size_t TickPanel::asset_column(const std::string& id) const {
    auto it = std::find(asset_ids.begin(), asset_ids.end(), id);
    if (it == asset_ids.end()) throw DataError("unknown asset '" + id + "'");
    return static_cast<std::size_t>(it - asset_ids.begin());
}

void TickPanel::validate() const {
    calendar.validate();
    const std::size_t t_rows = calendar.size() * static_cast<std::size_t>(kSessionSeconds);
    if (timestamps.size() != t_rows || session_index.size() != t_rows || prices.rows() != t_rows ||
        prices.cols() != asset_ids.size())
        throw DataError("panel dimensions are inconsistent with its calendar");
    for (std::size_t s = 0; s < calendar.size(); ++s) {
        const auto [b, e] = session_rows(s);
        for (std::size_t t = b; t < e; ++t) {
            if (session_index[t] != s) throw DataError("row assigned to wrong session");
            if (timestamps[t] != calendar.sessions[s].open + 1 + static_cast<std::int64_t>(t - b))
                throw DataError("timestamps are not on the 1-second session grid");
        }
    }
    for (double p : prices.flat())
        if (!(p > 0.0)) throw DataError("non-positive price");
}

namespace {

struct Observation {
    std::int64_t ts;
    double price;
};

}  // namespace

TickPanel load_tick_csv(const std::filesystem::path& path, const SessionCalendar& calendar) {
    calendar.validate();
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path.string() + "'");

    std::string line;
    if (!std::getline(in, line) || trim(line) != "timestamp,asset_id,price")
        throw DataError(path.string() + ":1: expected header 'timestamp,asset_id,price'");

    std::vector<std::string> ids;
    std::unordered_map<std::string, std::size_t> id_index;
    // observations[asset][session]
    std::vector<std::vector<std::vector<Observation>>> obs;

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        const auto text = trim(line);
        if (text.empty()) continue;
        const auto fields = split(text, ',');
        const auto where = path.string() + ":" + std::to_string(line_no) + ": ";
        if (fields.size() != 3) throw DataError(where + "malformed row, expected 3 fields");
        std::int64_t ts = 0;
        double price = 0.0;
        try {
            ts = parse_timestamp(trim(fields[0]));
            price = parse_double(trim(fields[2]));
        } catch (const DataError& e) {
            throw DataError(where + "malformed row: " + e.what());
        }
        if (!(price > 0.0)) throw DataError(where + "non-positive price");
        const std::string id(trim(fields[1]));
        if (id.empty()) throw DataError(where + "malformed row: empty asset_id");

        auto [it, inserted] = id_index.try_emplace(id, ids.size());
        if (inserted) {
            ids.push_back(id);
            obs.emplace_back(calendar.size());
        }
        const auto s = calendar.find(date_of(ts));
        if (!s) continue;
        const auto& sess = calendar.sessions[*s];
        if (ts < sess.open || ts > sess.close) continue;
        obs[it->second][*s].push_back({ts, price});
    }
    if (ids.empty()) throw DataError(path.string() + ": no data rows");

    TickPanel panel;
    panel.calendar = calendar;
    panel.asset_ids = ids;
    const std::size_t t_rows = calendar.size() * static_cast<std::size_t>(kSessionSeconds);
    panel.timestamps.resize(t_rows);
    panel.session_index.resize(t_rows);
    panel.prices = Matrix(t_rows, ids.size());
    for (std::size_t s = 0; s < calendar.size(); ++s) {
        const auto [b, e] = panel.session_rows(s);
        for (std::size_t t = b; t < e; ++t) {
            panel.timestamps[t] = calendar.sessions[s].open + 1 + static_cast<std::int64_t>(t - b);
            panel.session_index[t] = static_cast<std::uint32_t>(s);
        }
    }
    for (std::size_t a = 0; a < ids.size(); ++a) {
        for (std::size_t s = 0; s < calendar.size(); ++s) {
            auto& list = obs[a][s];
            if (list.empty())
                throw DataError("asset '" + ids[a] + "' has no data in session " + calendar.sessions[s].date.to_string());
            std::stable_sort(list.begin(), list.end(), [](const auto& x, const auto& y) { return x.ts < y.ts; });
            const auto [b, e] = panel.session_rows(s);
            std::size_t k = 0;
            double current = list.front().price;
            for (std::size_t t = b; t < e; ++t) {
                while (k < list.size() && list[k].ts <= panel.timestamps[t]) current = list[k++].price;
                panel.prices(t, a) = current;
            }
        }
    }
    return panel;
}

void write_tick_csv(const TickPanel& panel, const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    std::string buf;
    buf.reserve(1 << 20);
    buf += "timestamp,asset_id,price\n";
    for (std::size_t t = 0; t < panel.rows(); ++t) {
        const auto ts = std::to_string(panel.timestamps[t]);
        for (std::size_t a = 0; a < panel.assets(); ++a) {
            buf += ts;
            buf += ',';
            buf += panel.asset_ids[a];
            buf += ',';
            buf += format_double(panel.prices(t, a));
            buf += '\n';
        }
        if (buf.size() > (1 << 20)) {
            out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
            buf.clear();
        }
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw Error("write failed for '" + path.string() + "'");
}

}  // namespace arrkit::market
