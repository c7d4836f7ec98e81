#include "result.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace biphoton::scenario {

namespace {

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

}  // namespace

void ResultRecord::add(std::string name, double value, std::string unit) {
    scalars.push_back({std::move(name), value, std::move(unit)});
}

double ResultRecord::scalar(const std::string& name) const {
    for (const auto& s : scalars) {
        if (s.name == name) return s.value;
    }
    throw std::out_of_range("no scalar named " + name);
}

const Table& ResultRecord::table(const std::string& name) const {
    for (const auto& t : tables) {
        if (t.name == name) return t;
    }
    throw std::out_of_range("no table named " + name);
}

nlohmann::json ResultRecord::summary() const {
    nlohmann::json out;
    out["command"] = command;
    out["config"] = config;
    nlohmann::json s = nlohmann::json::object();
    for (const auto& x : scalars) s[x.name] = {{"value", x.value}, {"unit", x.unit}};
    out["scalars"] = s;
    out["notes"] = notes;
    nlohmann::json t = nlohmann::json::array();
    for (const auto& x : tables) {
        t.push_back({{"name", x.name}, {"file", x.name + ".csv"}, {"columns", x.columns}, {"rows", x.rows.size()}});
    }
    out["tables"] = t;
    return out;
}

std::string to_csv(const Table& table) {
    std::ostringstream os;
    for (std::size_t i = 0; i < table.columns.size(); ++i) os << (i ? "," : "") << table.columns[i];
    os << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_number(row[i]);
        os << '\n';
    }
    return os.str();
}

std::string format_scalars(const ResultRecord& record) {
    std::size_t width = 0;
    for (const auto& s : record.scalars) width = std::max(width, s.name.size());
    std::ostringstream os;
    os << record.command << '\n';
    for (const auto& s : record.scalars) {
        os << "  " << s.name << std::string(width - s.name.size() + 2, ' ') << format_number(s.value);
        if (s.unit != "1") os << ' ' << s.unit;
        os << '\n';
    }
    for (auto it = record.notes.begin(); it != record.notes.end(); ++it) {
        os << "  " << it.key() << ": " << (it->is_string() ? it->get<std::string>() : it->dump()) << '\n';
    }
    return os.str();
}

void write_atomic(const std::filesystem::path& path, const std::string& contents) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        f << contents;
        f.flush();
        if (!f) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

void write_result(const ResultRecord& record, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    for (const auto& t : record.tables) write_atomic(dir / (t.name + ".csv"), to_csv(t));
    write_atomic(dir / "summary.json", record.summary().dump(2) + "\n");
}

}  // namespace biphoton::scenario
