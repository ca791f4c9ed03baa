import { ApiClient } from "./api.js";
import { initApp } from "./main.js";

initApp(document, new ApiClient(""));
