#include "mda/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

namespace mda::ingest {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

bool parse_int64(const std::string& s, std::int64_t& out) {
    std::string t = trim(s);
    if (t.empty()) return false;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
    return ec == std::errc() && ptr == t.data() + t.size();
}

}  // namespace

Date parse_date(const std::string& iso) {
    std::string t = trim(iso);
    if (t.size() != 10 || t[4] != '-' || t[7] != '-')
        throw ParseError("bad date '" + t + "' (want YYYY-MM-DD)");
    int y, m, d;
    auto num = [&](int off, int len, int& out) {
        auto [ptr, ec] = std::from_chars(t.data() + off, t.data() + off + len, out);
        if (ec != std::errc() || ptr != t.data() + off + len)
            throw ParseError("bad date '" + t + "'");
    };
    num(0, 4, y);
    num(5, 2, m);
    num(8, 2, d);
    Date date{std::chrono::year{y}, std::chrono::month{unsigned(m)},
              std::chrono::day{unsigned(d)}};
    if (!date.ok()) throw ParseError("invalid calendar date '" + t + "'");
    return date;
}

std::string format_date(const Date& d) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", int(d.year()),
                  unsigned(d.month()), unsigned(d.day()));
    return buf;
}

long days_between(const Date& from, const Date& to) {
    using std::chrono::sys_days;
    return (sys_days(to) - sys_days(from)).count();
}

std::string FilingRecord::accession() const {
    auto slash = path.find_last_of('/');
    std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
    auto dot = base.find_last_of('.');
    if (dot != std::string::npos) base = base.substr(0, dot);
    return base;
}

IndexParseResult parse_master_index(const std::string& index_text,
                                    const std::string& form_filter) {
    IndexParseResult result;
    std::istringstream in(index_text);
    std::string line;
    bool any_data = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        ++result.total_lines;
        auto fields = split(line, '|');
        std::int64_t cik = 0;
        // Data lines are exactly CIK|Company Name|Form Type|Date Filed|Filename.
        // Everything before them (banner, column captions, dashes) is header.
        if (fields.size() != 5) {
            if (any_data)
                ++result.skipped_lines;
            else
                ++result.header_lines;
            continue;
        }
        if (!parse_int64(fields[0], cik) || cik <= 0) {
            // The column-caption line "CIK|Company Name|..." also has 5 fields.
            if (any_data)
                ++result.skipped_lines;
            else
                ++result.header_lines;
            continue;
        }
        Date filed{};
        try {
            filed = parse_date(fields[3]);
        } catch (const ParseError&) {
            ++result.skipped_lines;
            any_data = true;
            continue;
        }
        std::string form = trim(fields[2]);
        std::string path = trim(fields[4]);
        if (form.empty() || path.empty()) {
            ++result.skipped_lines;
            any_data = true;
            continue;
        }
        any_data = true;
        if (!form_filter.empty() && form != form_filter) {
            ++result.skipped_lines;
            continue;
        }
        result.records.push_back(
            FilingRecord{cik, trim(fields[1]), form, filed, path});
    }
    if (!any_data) throw EmptyIndex("index contains no data lines");
    return result;
}

std::vector<BankruptcyEvent> load_bankruptcy_labels(const std::string& label_text) {
    std::vector<BankruptcyEvent> events;
    std::istringstream in(label_text);
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        ++row;
        if (row == 1) continue;  // header
        if (trim(line).empty()) continue;
        auto fields = split(line, ',');
        if (fields.size() != 3)
            throw ParseError("row " + std::to_string(row) + ": want cik,petition_date,chapter");
        std::int64_t cik = 0;
        if (!parse_int64(fields[0], cik) || cik <= 0)
            throw ParseError("row " + std::to_string(row) + ": bad cik '" + fields[0] + "'");
        Date date{};
        try {
            date = parse_date(fields[1]);
        } catch (const ParseError& e) {
            throw ParseError("row " + std::to_string(row) + ": " + e.what());
        }
        std::int64_t ch = 0;
        if (!parse_int64(fields[2], ch) || (ch != 7 && ch != 11))
            throw ParseError("row " + std::to_string(row) + ": chapter must be 7 or 11");
        events.push_back(BankruptcyEvent{
            cik, date, ch == 7 ? Chapter::kChapter7 : Chapter::kChapter11});
    }
    return events;
}

std::vector<std::pair<FilingRecord, Label>> label_filings(
    const std::vector<FilingRecord>& filings,
    const std::vector<BankruptcyEvent>& events, int horizon_days) {
    std::multimap<std::int64_t, Date> by_cik;
    for (const auto& e : events) by_cik.emplace(e.cik, e.filing_date);

    std::vector<std::pair<FilingRecord, Label>> out;
    out.reserve(filings.size());
    for (const auto& f : filings) {
        Label label;
        label.horizon_days = horizon_days;
        auto [lo, hi] = by_cik.equal_range(f.cik);
        for (auto it = lo; it != hi; ++it) {
            long gap = days_between(f.date_filed, it->second);
            if (gap > 0 && gap <= horizon_days) {
                label.value = 1;
                break;
            }
        }
        out.emplace_back(f, label);
    }
    return out;
}

// ---------------------------------------------------------------------------

double SystemClock::now() {
    using namespace std::chrono;
    return duration<double>(steady_clock::now().time_since_epoch()).count();
}

void SystemClock::sleep_until(double t) {
    double dt = t - now();
    if (dt > 0) std::this_thread::sleep_for(std::chrono::duration<double>(dt));
}

EdgarTransport::EdgarTransport(std::string user_agent, std::string host)
    : user_agent_(std::move(user_agent)), host_(std::move(host)) {}

HttpResponse EdgarTransport::get(const std::string& path) {
    httplib::SSLClient client(host_);
    client.set_follow_location(true);
    httplib::Headers headers{{"User-Agent", user_agent_}};
    std::string full = path.empty() || path[0] == '/' ? path : "/Archives/" + path;
    auto res = client.Get(full, headers);
    if (!res) throw TransportError("GET " + full + ": " + httplib::to_string(res.error()));
    return HttpResponse{res->status, res->body};
}

RateLimiter::RateLimiter(double requests_per_second, Clock& clock)
    : interval_(1.0 / requests_per_second), next_allowed_(clock.now()), clock_(clock) {}

void RateLimiter::acquire() {
    static std::mutex mu;
    std::lock_guard lock(mu);
    double t = clock_.now();
    if (t < next_allowed_) {
        clock_.sleep_until(next_allowed_);
        t = next_allowed_;
    }
    next_allowed_ = t + interval_;
}

FilingFetcher::FilingFetcher(std::filesystem::path cache_dir, FetchOptions options,
                             Transport& transport, Clock& clock)
    : cache_dir_(std::move(cache_dir)),
      options_(options),
      transport_(transport),
      clock_(clock),
      limiter_(options.rate_limit, clock) {}

std::filesystem::path FilingFetcher::cache_path(const FilingRecord& record) const {
    return cache_dir_ / "raw" / std::to_string(record.cik) /
           (record.accession() + ".txt");
}

RawFiling FilingFetcher::fetch(const FilingRecord& record) {
    auto path = cache_path(record);
    if (std::filesystem::exists(path)) {
        std::ifstream in(path, std::ios::binary);
        std::ostringstream body;
        body << in.rdbuf();
        RawFiling filing{record, body.str(), std::chrono::system_clock::now(), 0};
        filing.byte_length = filing.body.size();
        return filing;
    }

    double backoff = options_.backoff_initial;
    for (int attempt = 1;; ++attempt) {
        limiter_.acquire();
        HttpResponse res;
        try {
            res = transport_.get(record.path);
        } catch (const TransportError&) {
            if (attempt >= options_.max_attempts) throw;
            clock_.sleep_until(clock_.now() + backoff);
            backoff *= 2.0;
            continue;
        }
        if (res.status == 404) throw NotFound(record.path);
        if (res.status != 200) {
            if (attempt >= options_.max_attempts)
                throw TransportError("HTTP " + std::to_string(res.status) + " for " +
                                     record.path);
            clock_.sleep_until(clock_.now() + backoff);
            backoff *= 2.0;
            continue;
        }
        atomic_write(path, res.body);
        RawFiling filing{record, std::move(res.body),
                         std::chrono::system_clock::now(), 0};
        filing.byte_length = filing.body.size();
        return filing;
    }
}

void atomic_write(const std::filesystem::path& target, const std::string& content) {
    std::filesystem::create_directories(target.parent_path());
    auto tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw TransportError("cannot write " + tmp.string());
    }
    std::filesystem::rename(tmp, target);
}

}  // namespace mda::ingest
