#pragma once

#include <span>

#include <json.hpp>

#include "bwe/bullwhip.hpp"
#include "bwe/evaluation.hpp"
#include "bwe/neural.hpp"
#include "bwe/sarima.hpp"
#include "bwe/trend_seasonal.hpp"

namespace bwe {

using Json = nlohmann::json;

Json to_json(const SarimaModel& model);
SarimaModel sarima_from_json(const Json& j);

Json to_json(const TrendSeasonalModel& model);
TrendSeasonalModel trend_seasonal_from_json(const Json& j);

Json to_json(const RnnModel& model);
RnnModel rnn_from_json(const Json& j);
Json to_json(const LstmModel& model);
LstmModel lstm_from_json(const Json& j);

Json to_json(const BenchmarkTable& table);
Json to_json(const ZoneSummary& summary);
Json to_json(std::span<const AmplificationRecord> records);

}  // namespace bwe
