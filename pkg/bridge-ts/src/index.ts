export {
  BridgeError,
  BridgeHandle,
  ContractStatus,
  type BridgeOptions,
} from "./bridge.js";
