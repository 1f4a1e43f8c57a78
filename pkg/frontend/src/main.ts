// Console wiring: load a snapshot, subscribe to deltas, and connect the
// operator forms to the API. Mutations are fire-and-confirm: the UI marks
// them pending and only the confirming delta changes what is drawn.

import { ApiClient, ApiError } from "./api.js";
import { buildHeader, validateForm, type FlowForm } from "./headers.js";
import { renderFlowTable, renderStatus, renderTopology } from "./render.js";
import { ConsoleStore } from "./store.js";
import { subscribeDeltas } from "./sse.js";

const baseUrl = (window as { FARSEC_API?: string }).FARSEC_API ?? "";
const api = new ApiClient(baseUrl);
const store = new ConsoleStore();

const svg = document.getElementById("topology") as unknown as SVGSVGElement;
const flowTable = document.querySelector("#flows tbody") as HTMLTableSectionElement;
const banner = document.getElementById("status")!;
const errorBox = document.getElementById("error")!;

store.onChange(() => {
  renderTopology(store, svg);
  renderFlowTable(store, flowTable);
  renderStatus(store, banner);
});

function showError(message: string): void {
  errorBox.textContent = message;
  if (message) setTimeout(() => (errorBox.textContent = ""), 6000);
}

async function resync(): Promise<void> {
  store.acceptSnapshot(await api.getState());
}

async function connect(): Promise<void> {
  await resync();
  subscribeDeltas(baseUrl, {
    since: store.version,
    onDelta: (delta) => {
      try {
        store.acceptDelta(delta);
      } catch {
        void resync(); // gap: fall back to a fresh snapshot
      }
    },
    onClose: () => {
      store.setStatus("disconnected");
      setTimeout(() => void connect(), 2000);
    },
  });
}

(document.getElementById("link-form") as HTMLFormElement).addEventListener(
  "submit",
  async (event) => {
    event.preventDefault();
    const form = event.target as HTMLFormElement;
    const src = (form.elements.namedItem("src") as HTMLInputElement).value;
    const dst = (form.elements.namedItem("dst") as HTMLInputElement).value;
    const level = Number((form.elements.namedItem("level") as HTMLInputElement).value);
    try {
      store.markPending({ src, dst, level });
      await api.setLinkLevel(src, dst, level);
    } catch (error) {
      showError(error instanceof ApiError ? `link edit: ${error.message}` : String(error));
    }
  },
);

(document.getElementById("flow-form") as HTMLFormElement).addEventListener(
  "submit",
  async (event) => {
    event.preventDefault();
    const form = event.target as HTMLFormElement;
    const value = (name: string) =>
      (form.elements.namedItem(name) as HTMLInputElement).value;
    const sourceHost = value("source-host");
    const destHost = value("dest-host");
    const hosts = store.state?.hosts ?? [];
    const src = hosts.find((h) => h.name === sourceHost);
    const dst = hosts.find((h) => h.name === destHost);
    if (!src || !dst) {
      showError("unknown host name");
      return;
    }
    const flowForm: FlowForm = {
      protocol: value("protocol") as FlowForm["protocol"],
      srcIp: src.ip,
      dstIp: dst.ip,
      dscp: Number(value("dscp")),
      srcPort: Number(value("src-port")),
      dstPort: Number(value("dst-port")),
    };
    const problems = validateForm(flowForm);
    if (problems.length) {
      showError(problems.join("; "));
      return;
    }
    try {
      const decision = await api.injectFlow(sourceHost, destHost, buildHeader(flowForm));
      const verdict = decision.admitted
        ? `admitted via ${decision.path?.join(" -> ")}`
        : "rejected: no feasible path";
      showError(`flow ${decision.flow_id} (level ${decision.requirement}): ${verdict}`);
    } catch (error) {
      showError(error instanceof ApiError ? `inject: ${error.message}` : String(error));
    }
  },
);

(document.getElementById("sla-form") as HTMLFormElement).addEventListener(
  "submit",
  async (event) => {
    event.preventDefault();
    const editor = document.getElementById("sla-editor") as HTMLTextAreaElement;
    try {
      await api.putSla(editor.value);
    } catch (error) {
      showError(error instanceof ApiError ? `SLA: ${error.message}` : String(error));
    }
  },
);

store.onChange(() => {
  const editor = document.getElementById("sla-editor") as HTMLTextAreaElement;
  if (document.activeElement !== editor && store.state) {
    const { rules } = store.state.sla;
    editor.value =
      "Protocol,SourceAddress,DestinationAddress,DSCP," +
      "SourcePortMin,SourcePortMax,DestinationPortMin,DestinationPortMax,MinSec\n" +
      rules
        .map(
          (r) =>
            `${r.protocol},${r.src_cidr},${r.dst_cidr},${r.dscp},${r.src_port_min},` +
            `${r.src_port_max},${r.dst_port_min},${r.dst_port_max},${r.min_sec}`,
        )
        .join("\n") +
      (rules.length ? "\n" : "");
  }
});

void connect();
