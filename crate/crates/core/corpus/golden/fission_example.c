void main() {
    int a[10];
    int b[10];
    for (int i = 1; i < 10; i++) {
        a[i] = a[i-1] + i;
        b[i] = b[i-1] + i;
    }
}
